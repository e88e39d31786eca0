use std::process::Command;

use serde_json::Value;

use cohvec::coeff_poly::Polynomial;
use cohvec::coset_geometry::CosetSequence;

fn cohvec(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cohvec")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let json = if stdout.trim().is_empty() { Value::Null } else { serde_json::from_str(&stdout).expect("stdout is JSON") };
    (out.status.code().unwrap(), json, stderr)
}

fn strip_elapsed(mut v: Value) -> Value {
    if let Some(checks) = v["checks"].as_array_mut() {
        for c in checks {
            c.as_object_mut().unwrap().remove("elapsed_ms");
        }
    }
    v
}

#[test]
fn classify_reports_l_and_n() {
    let (code, r, _) = cohvec(&["classify", "--l", "5,3,-1,-3", "--twist", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(r["command"], "classify");
    let c = &r["data"]["classification"];
    assert_eq!(c["L"], 1);
    assert_eq!(c["N"], serde_json::json!([4, 2]));
    assert_eq!(c["nonvanishing"], true);
    assert_eq!(r["overall"], "pass");
}

#[test]
fn classify_from_weights() {
    let (code, r, _) = cohvec(&["classify", "--weights", "3,1;2,0"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["l"], serde_json::json!([4, -2]));
    assert_eq!(r["data"]["classification"]["L"], 1);
    let (code, r, _) = cohvec(&["classify", "--weights", "3,1;2,1"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["pure"], false);
}

#[test]
fn eigen_and_factorization_examples() {
    let (code, r, _) = cohvec(&["verify", "eigen", "--n", "2", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["checks"][0]["status"], "certified_exact");
    let (code, r, _) = cohvec(&["verify", "factorization", "--n", "2", "--N", "2,1", "--L", "0", "--l", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r["checks"][0]["status"], "certified_exact");
}

#[test]
fn odd_determinant_power_fails_literal_factorization() {
    let (code, r, _) = cohvec(&["verify", "factorization", "--n", "2", "--N", "2,1", "--L", "0", "--l", "1"]);
    assert_eq!(code, 1);
    assert_eq!(r["overall"], "fail");
    assert_eq!(r["checks"][0]["status"], "fail");
    assert_eq!(r["checks"][1]["status"], "certified_exact");
}

#[test]
fn suites_pass() {
    for args in [
        vec!["verify", "phi", "--n", "2"],
        vec!["verify", "bracket", "--n", "1", "--samples", "10"],
        vec!["verify", "centrality", "--n", "1", "--samples", "5"],
        vec!["verify", "pairing-lemma", "--n", "2"],
        vec!["verify", "equivariance", "--n", "2", "--N", "3,1", "--L", "-1", "--l", "2", "--samples", "10"],
        vec!["cosets", "modular-check", "--n", "2", "--samples", "10"],
    ] {
        let (code, r, err) = cohvec(&args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert_eq!(r["overall"], "pass");
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "equivariance", "--n", "1", "--N", "2", "--L", "0", "--l", "1", "--seed", "7", "--samples", "5"];
    let (_, a, _) = cohvec(&args);
    let (_, b, _) = cohvec(&args);
    assert_eq!(strip_elapsed(a), strip_elapsed(b));
}

#[test]
fn construct_then_casimir_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let vec_path = dir.path().join("f.json");
    let out_path = dir.path().join("omega_f.json");
    let (code, r, _) = cohvec(&["construct", "--n", "1", "--N", "1", "--out", vec_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["case"], 1);
    let p = Polynomial::from_json(&std::fs::read_to_string(&vec_path).unwrap()).unwrap();
    assert_eq!(p.num_terms() as u64, r["data"]["num_terms"].as_u64().unwrap());

    // F_1 at n = 1 is Φ_{1,2}: Ω acts by 4 only modulo the relations
    let phi = dir.path().join("phi.json");
    std::fs::write(&phi, cohvec::test_vectors::phi_pair(1, 2, 1).unwrap().to_json()).unwrap();
    let (code, r, _) = cohvec(&["casimir", "--in", phi.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["eigenvalue"], Value::Null);
    let q = Polynomial::from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(q, cohvec::lie_action::apply_casimir(&cohvec::test_vectors::phi_pair(1, 2, 1).unwrap()));

    // Δ_{2,+} = det Z is an exact eigenvector
    let det = dir.path().join("det.json");
    let d = cohvec::test_vectors::determinant_factor(
        cohvec::test_vectors::DetFamily::Two,
        cohvec::test_vectors::DetSign::Plus,
        2,
    );
    std::fs::write(&det, d.to_json()).unwrap();
    let (code, r, _) = cohvec(&["casimir", "--in", det.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["eigenvalue"], "4");
}

#[test]
fn sequence_file_modular_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.json");
    let seq = CosetSequence::new(2, vec![(1, 3), (2, 4)], vec![], vec![]).unwrap();
    std::fs::write(&path, seq.to_json()).unwrap();
    let (code, r, _) = cohvec(&["cosets", "modular-check", "--seq", path.to_str().unwrap(), "--samples", "5"]);
    assert_eq!(code, 0);
    assert_eq!(r["checks"].as_array().unwrap().len(), 1);
    std::fs::write(&path, r#"{"n":2,"pairs":[[1,2]],"diag_plus":[3],"diag_minus":[]}"#).unwrap();
    let (code, _, err) = cohvec(&["cosets", "modular-check", "--seq", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));
}

#[test]
fn cosets_list_counts() {
    let (code, r, _) = cohvec(&["cosets", "list", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["count"], 15);
    let (_, r, _) = cohvec(&["cosets", "list", "--n", "2"]);
    let dims: Vec<u64> = r["data"]["sequences"].as_array().unwrap().iter().map(|s| s["stabilizer_real_dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![8, 6, 4]);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["nope"],
        vec!["verify"],
        vec!["verify", "eigen"],
        vec!["construct", "--n", "2", "--N", "1,2"],
        vec!["construct", "--n", "1", "--N", "1", "--l", "5"],
        vec!["casimir", "--in", "/nonexistent/file.json"],
        vec!["cosets", "list", "--n", "4"],
    ] {
        let (code, out, err) = cohvec(&args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(out, Value::Null);
        assert!(!err.is_empty());
    }
}

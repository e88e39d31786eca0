//! Command-line front end. Every invocation writes one JSON report to
//! standard output and a short summary to standard error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::coeff_poly::{random_polynomial, Polynomial};
use crate::coset_geometry::{
    coset_representative, delta_triviality_check, enumerate_sequences, epsilon, stabilizer_basis, CosetSequence,
};
use crate::lie_action::{apply_casimir, bracket_defect, casimir_commutator};
use crate::linalg::seeded_rng;
use crate::report::{run_checks, CheckFn, VerificationReport};
use crate::test_vectors::{
    cohomological_factors, cohomological_vector_in_case, fundamental_polynomial, fundamental_relation_minors, pairing_poly, pairing_poly_v,
    phi_pair, preferred_case, verify_equivariance, verify_restriction_factorization,
    verify_restriction_factorization_signed, SignCase, TestVectorSpec,
};
use crate::unitary_congruence::{congruent_mod_i, congruent_mod_i_extended, reduce_by_relations, relation_generators, CongruenceVerdict};
use crate::weight_theory::{
    classify, fundamental_casimir, purity_constant, shalika_brute, HighestWeight, InducedParams,
};

#[derive(Parser, Debug)]
#[command(name = "cohvec", version, about = "Verify cohomological test vectors and their algebraic identities")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct GlobalOpts {
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shalika classification of a weight or exponent vector.
    Classify(ClassifyArgs),
    /// Build the cohomological vector `F_{N,χ}`.
    Construct(VectorArgs),
    /// Apply the Casimir operator to a polynomial file.
    Casimir {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Double cosets `B \ G / H'`.
    #[command(subcommand)]
    Cosets(CosetsCommand),
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["weights", "l"])))]
struct ClassifyArgs {
    /// `ν;ν̄`, each a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    weights: Option<String>,
    /// Exponent vector `l`, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    l: Option<Vec<i64>>,
    /// Purity constant accompanying `--l`.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    m: i64,
    /// Twist `l` for the nonvanishing predicate.
    #[arg(long, allow_negative_numbers = true)]
    twist: Option<i64>,
}

#[derive(Args, Debug, Clone)]
struct VectorArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "N", value_delimiter = ',', required = true)]
    big_n: Vec<i64>,
    #[arg(long = "L", default_value_t = 0, allow_negative_numbers = true)]
    big_l: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    l: i64,
    /// Force a sign case 1–4 instead of the lowest applicable one.
    #[arg(long)]
    case: Option<u8>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct NArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// `Ω F_k ≡ (4nk − 2k(k−1)) F_k`.
    Eigen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// `Ω Φ_{jl} ≡ 4n Φ_{jl}` for all `j ≠ l`.
    Phi(NArgs),
    /// `[E_{αβ}, E_{βα}] = H_α − H_β` on random polynomials.
    Bracket(NArgs),
    /// `[Ω, E_{αβ}] = 0` on random polynomials.
    Centrality(NArgs),
    /// Left torus and right `K ∩ H` equivariance of `F_{N,χ}`.
    Equivariance(VectorArgs),
    /// Block factorization of `F_{N,χ}(xw)`.
    Factorization(VectorArgs),
    /// `⟨v_j, v_l⟩ + ⟨u_j, u_l⟩ ≡ 0` by exact division.
    PairingLemma(NArgs),
}

#[derive(Subcommand, Debug)]
enum CosetsCommand {
    /// Enumerate sequences with their representatives.
    List {
        #[arg(long)]
        n: usize,
        /// Include sequences with signed diagonal entries.
        #[arg(long)]
        all: bool,
    },
    /// `δ_B^{−1/2} δ_N = 1` on `M_N`.
    ModularCheck {
        #[arg(long, required_unless_present = "seq")]
        n: Option<usize>,
        #[arg(long)]
        seq: Option<PathBuf>,
        #[arg(long)]
        all: bool,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutcome {
    fn usage(msg: String) -> Self {
        Self { code: 2, stdout: String::new(), stderr: msg }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutcome { code, stdout: text, stderr: String::new() }
            } else {
                CliOutcome::usage(text)
            };
        }
    };
    if cli.global.samples == 0 || cli.global.tol.is_nan() || cli.global.tol <= 0.0 {
        return CliOutcome::usage("error: --samples must be positive and --tol > 0\n".into());
    }
    match dispatch(cli) {
        Ok((report, errors)) => {
            let mut stderr = report.summary();
            for e in errors {
                stderr.push_str(&e);
                stderr.push('\n');
            }
            CliOutcome { code: report.exit_code(), stdout: report.to_json() + "\n", stderr }
        }
        Err(msg) => CliOutcome::usage(format!("error: {msg}\n")),
    }
}

type Dispatched = (VerificationReport, Vec<String>);

fn dispatch(cli: Cli) -> Result<Dispatched, String> {
    let g = cli.global;
    match cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Construct(a) => cmd_construct(a, g),
        Command::Casimir { input, out } => cmd_casimir(input, out),
        Command::Verify(v) => cmd_verify(v, g),
        Command::Cosets(c) => cmd_cosets(c, g),
    }
}

fn globals_json(g: GlobalOpts) -> Value {
    json!({ "seed": g.seed, "tol": g.tol, "samples": g.samples })
}

fn finish(command: &str, inputs: Value, checks: Vec<(String, CheckFn<'_>)>, data: Option<Value>) -> Dispatched {
    let (records, errors) = run_checks(checks);
    (VerificationReport::new(command, inputs, records, data), errors)
}

fn parse_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("bad integer {t:?}: {e}")))
        .collect()
}

fn cmd_classify(a: ClassifyArgs) -> Result<Dispatched, String> {
    let (params, inputs) = if let Some(w) = &a.weights {
        let (nu, nb) = w.split_once(';').ok_or("--weights must be `ν;ν̄`")?;
        let hw = HighestWeight::new(parse_list(nu)?, parse_list(nb)?).map_err(|e| e.to_string())?;
        let inputs = json!({ "weights": { "nu": hw.nu, "nu_bar": hw.nu_bar }, "twist": a.twist });
        match purity_constant(&hw) {
            None => {
                let data = json!({ "pure": false });
                return Ok(finish("classify", inputs, Vec::new(), Some(data)));
            }
            Some(_) => (InducedParams::from_weight(&hw).map_err(|e| e.to_string())?.expect("pure"), inputs),
        }
    } else {
        let l = a.l.clone().expect("clap group requires --weights or --l");
        let inputs = json!({ "l": l, "m": a.m, "twist": a.twist });
        (InducedParams::from_exponents(l, a.m).map_err(|e| e.to_string())?, inputs)
    };
    let c = classify(&params, a.twist);
    let data = json!({ "pure": true, "l": params.l, "classification": c });
    let l = params.l.clone();
    let expected = params.big_l;
    let checks: Vec<(String, CheckFn)> = vec![(
        "shalika_brute_agreement".into(),
        Box::new(move || {
            let brute = shalika_brute(&l).map_err(|e| e.to_string())?;
            Ok(CongruenceVerdict::exact(usize::from(brute != expected)))
        }),
    )];
    Ok(finish("classify", inputs, checks, Some(data)))
}

fn vector_spec(a: &VectorArgs) -> Result<(TestVectorSpec, SignCase), String> {
    let spec = TestVectorSpec::new(a.n, a.big_n.clone(), a.big_l, a.l).map_err(|e| e.to_string())?;
    let case = match a.case {
        None => preferred_case(&spec).map_err(|e| e.to_string())?,
        Some(k) => {
            let case = match k {
                1 => SignCase::One,
                2 => SignCase::Two,
                3 => SignCase::Three,
                4 => SignCase::Four,
                _ => return Err(format!("--case must be 1..4, got {k}")),
            };
            spec.check_construction().map_err(|e| e.to_string())?;
            if !SignCase::applicable(spec.big_l, spec.l).contains(&case) {
                return Err(format!("case {k} does not apply to l+L = {}, l+2L = {}", a.l + a.big_l, a.l + 2 * a.big_l));
            }
            case
        }
    };
    Ok((spec, case))
}

fn vector_inputs(a: &VectorArgs, g: GlobalOpts) -> Value {
    json!({ "n": a.n, "N": a.big_n, "L": a.big_l, "l": a.l, "case": a.case, "global": globals_json(g) })
}

fn factors_json(spec: &TestVectorSpec, case: SignCase) -> Value {
    cohomological_factors(spec, case)
        .into_iter()
        .map(|(f, e)| json!({ "factor": format!("{f:?}"), "exponent": e }))
        .collect()
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn cmd_construct(a: VectorArgs, g: GlobalOpts) -> Result<Dispatched, String> {
    let (spec, case) = vector_spec(&a)?;
    let p = cohomological_vector_in_case(&spec, case).map_err(|e| e.to_string())?;
    let mut data = json!({
        "case": case.number(),
        "factors": factors_json(&spec, case),
        "num_terms": p.num_terms(),
        "degree": p.degree(),
    });
    match &a.out {
        Some(path) => write_file(path, &p.to_json())?,
        None => data["polynomial"] = p.to_json_value(),
    }
    let inputs = vector_inputs(&a, g);
    let checks: Vec<(String, CheckFn)> = vec![(
        "equivariance".into(),
        Box::new(move || Ok(verify_equivariance(&p, &spec, g.samples, g.seed, g.tol))),
    )];
    Ok(finish("construct", inputs, checks, Some(data)))
}

fn cmd_casimir(input: PathBuf, out: Option<PathBuf>) -> Result<Dispatched, String> {
    let text = std::fs::read_to_string(&input).map_err(|e| format!("cannot read {}: {e}", input.display()))?;
    let p = Polynomial::from_json(&text).map_err(|e| e.to_string())?;
    let q = apply_casimir(&p);
    // scalar c with Ωp = c·p, if any
    let eigenvalue = p.leading_term().and_then(|(m, c)| {
        let ratio = &q.coeff(m) * &c.inv().expect("nonzero lead");
        (q == p.scale(&ratio)).then(|| ratio.to_string())
    });
    let mut data = json!({ "num_terms_in": p.num_terms(), "num_terms_out": q.num_terms(), "eigenvalue": eigenvalue });
    match &out {
        Some(path) => write_file(path, &q.to_json())?,
        None => data["polynomial"] = q.to_json_value(),
    }
    let inputs = json!({ "in": input, "out": out });
    let checks: Vec<(String, CheckFn)> = vec![("apply_casimir".into(), Box::new(|| Ok(CongruenceVerdict::exact(0))))];
    Ok(finish("casimir", inputs, checks, Some(data)))
}

fn check_n(n: usize, max: usize) -> Result<(), String> {
    if n == 0 || n > max {
        return Err(format!("--n must be in [1, {max}], got {n}"));
    }
    Ok(())
}

/// Random polynomials used by the bracket and centrality suites.
fn random_suite(n: usize, count: usize, seed: u64) -> Vec<Polynomial> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| random_polynomial(n, 3, 6, &mut rng)).collect()
}

fn root_pairs(n: usize) -> Vec<(usize, usize)> {
    let size = 2 * n;
    (1..=size).flat_map(|a| (1..=size).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

fn cmd_verify(v: VerifyCommand, g: GlobalOpts) -> Result<Dispatched, String> {
    let mut checks: Vec<(String, CheckFn)> = Vec::new();
    let (name, inputs) = match v {
        VerifyCommand::Eigen { n, k } => {
            check_n(n, 4)?;
            let ks: Vec<usize> = match k {
                Some(k) if k == 0 || k > n => return Err(format!("--k must be in [1, {n}]")),
                Some(k) => vec![k],
                None => (1..=n).collect(),
            };
            for k in ks {
                checks.push((
                    format!("eigen[n={n},k={k}]"),
                    Box::new(move || {
                        let f = fundamental_polynomial(k, n).map_err(|e| e.to_string())?;
                        let c = fundamental_casimir(n as i64, k as i64);
                        let extra = fundamental_relation_minors(k, n);
                        Ok(congruent_mod_i_extended(&apply_casimir(&f), &f.scale_int(c), &extra, g.tol, g.samples, g.seed))
                    }),
                ));
            }
            ("verify eigen", json!({ "n": n, "k": k, "global": globals_json(g) }))
        }
        VerifyCommand::Phi(NArgs { n }) => {
            check_n(n, 4)?;
            for (j, l) in root_pairs(n) {
                checks.push((
                    format!("phi[{j},{l}]"),
                    Box::new(move || {
                        let p = phi_pair(j, l, n).map_err(|e| e.to_string())?;
                        Ok(congruent_mod_i(&apply_casimir(&p), &p.scale_int(4 * n as i64), g.tol, g.samples, g.seed))
                    }),
                ));
            }
            ("verify phi", json!({ "n": n, "global": globals_json(g) }))
        }
        VerifyCommand::Bracket(NArgs { n }) => {
            check_n(n, 3)?;
            let suite = std::sync::Arc::new(random_suite(n, g.samples, g.seed));
            for (a, b) in root_pairs(n) {
                let suite = suite.clone();
                checks.push((
                    format!("bracket[{a},{b}]"),
                    Box::new(move || {
                        let mut parts = Vec::new();
                        for p in suite.iter() {
                            let d = bracket_defect(a, b, p).map_err(|e| e.to_string())?;
                            parts.push(CongruenceVerdict::exact(d.num_terms()));
                        }
                        Ok(CongruenceVerdict::combine(parts))
                    }),
                ));
            }
            ("verify bracket", json!({ "n": n, "global": globals_json(g) }))
        }
        VerifyCommand::Centrality(NArgs { n }) => {
            check_n(n, 3)?;
            let suite = std::sync::Arc::new(random_suite(n, g.samples, g.seed));
            for (a, b) in root_pairs(n) {
                let suite = suite.clone();
                checks.push((
                    format!("centrality[{a},{b}]"),
                    Box::new(move || {
                        let mut parts = Vec::new();
                        for p in suite.iter() {
                            let d = casimir_commutator(a, b, p).map_err(|e| e.to_string())?;
                            parts.push(CongruenceVerdict::exact(d.num_terms()));
                        }
                        Ok(CongruenceVerdict::combine(parts))
                    }),
                ));
            }
            ("verify centrality", json!({ "n": n, "global": globals_json(g) }))
        }
        VerifyCommand::Equivariance(a) => {
            let (spec, case) = vector_spec(&a)?;
            let p = cohomological_vector_in_case(&spec, case).map_err(|e| e.to_string())?;
            checks.push((
                format!("equivariance[case={}]", case.number()),
                Box::new(move || Ok(verify_equivariance(&p, &spec, g.samples, g.seed, g.tol))),
            ));
            ("verify equivariance", vector_inputs(&a, g))
        }
        VerifyCommand::Factorization(a) => {
            let (spec, _) = vector_spec(&a)?;
            let s2 = spec.clone();
            checks.push((
                "restriction_factorization".into(),
                Box::new(move || verify_restriction_factorization(&spec).map_err(|e| e.to_string())),
            ));
            checks.push((
                "restriction_factorization_weyl_signed".into(),
                Box::new(move || verify_restriction_factorization_signed(&s2).map_err(|e| e.to_string())),
            ));
            ("verify factorization", vector_inputs(&a, g))
        }
        VerifyCommand::PairingLemma(NArgs { n }) => {
            check_n(n, 4)?;
            let gens = std::sync::Arc::new(relation_generators(n));
            for (j, l) in root_pairs(n) {
                let gens = gens.clone();
                checks.push((
                    format!("pairing_lemma[{j},{l}]"),
                    Box::new(move || {
                        let s = &pairing_poly_v(j, l, n) + &pairing_poly(j, l, n);
                        Ok(CongruenceVerdict::exact(reduce_by_relations(&s, &gens).0.num_terms()))
                    }),
                ));
            }
            ("verify pairing-lemma", json!({ "n": n, "global": globals_json(g) }))
        }
    };
    Ok(finish(name, inputs, checks, None))
}

fn sequence_json(seq: &CosetSequence) -> Result<Value, String> {
    let rep = coset_representative(seq).map_err(|e| e.to_string())?;
    let a_rows: Vec<Vec<f64>> = (0..rep.a.nrows()).map(|r| rep.a.row(r).iter().copied().collect()).collect();
    let dim = stabilizer_basis(seq).map_err(|e| e.to_string())?.len();
    Ok(json!({
        "sequence": seq,
        "w": rep.w.images(),
        "a": a_rows,
        "stabilizer_real_dim": dim,
    }))
}

fn representative_verdict(seq: &CosetSequence) -> Result<CongruenceVerdict, String> {
    let rep = coset_representative(seq).map_err(|e| e.to_string())?;
    let size = rep.x.nrows();
    let orth = (&rep.x * rep.x.transpose() - nalgebra::DMatrix::<f64>::identity(size, size)).abs().max();
    let w = rep.w.to_real();
    let d = &w * epsilon(seq.n) * w.transpose();
    let wrong = seq.labels().iter().enumerate().filter(|&(p, l)| d[(p, p)] != f64::from(l.target_sign())).count();
    let mut v = CongruenceVerdict::numeric(orth, 1, 1e-12);
    if wrong > 0 {
        v.status = crate::unitary_congruence::VerdictStatus::Fail;
    }
    Ok(v)
}

fn cmd_cosets(c: CosetsCommand, g: GlobalOpts) -> Result<Dispatched, String> {
    match c {
        CosetsCommand::List { n, all } => {
            let seqs = enumerate_sequences(n, !all).map_err(|e| e.to_string())?;
            let data: Vec<Value> = seqs.iter().map(sequence_json).collect::<Result<_, _>>()?;
            let mut checks: Vec<(String, CheckFn)> = Vec::new();
            for seq in seqs {
                checks.push((format!("representative[{}]", label(&seq)), Box::new(move || representative_verdict(&seq))));
            }
            let inputs = json!({ "n": n, "all": all });
            Ok(finish("cosets list", inputs, checks, Some(json!({ "count": data.len(), "sequences": data }))))
        }
        CosetsCommand::ModularCheck { n, seq, all } => {
            let (seqs, inputs) = match &seq {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                    let s = CosetSequence::from_json(&text).map_err(|e| e.to_string())?;
                    (vec![s], json!({ "seq": path, "global": globals_json(g) }))
                }
                None => {
                    let n = n.expect("clap requires --n without --seq");
                    let seqs = enumerate_sequences(n, !all).map_err(|e| e.to_string())?;
                    (seqs, json!({ "n": n, "all": all, "global": globals_json(g) }))
                }
            };
            let mut checks: Vec<(String, CheckFn)> = Vec::new();
            for s in seqs {
                checks.push((
                    format!("delta_triviality[{}]", label(&s)),
                    Box::new(move || delta_triviality_check(&s, g.samples, g.seed, g.tol).map_err(|e| e.to_string())),
                ));
            }
            Ok(finish("cosets modular-check", inputs, checks, None))
        }
    }
}

/// Compact label such as `13,24` or `12,3+,4-`.
fn label(seq: &CosetSequence) -> String {
    let mut parts: Vec<String> = seq.pairs.iter().map(|(i, j)| format!("{i}{j}")).collect();
    parts.extend(seq.diag_plus.iter().map(|t| format!("{t}+")));
    parts.extend(seq.diag_minus.iter().map(|t| format!("{t}-")));
    parts.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CliOutcome {
        run_command(std::iter::once("cohvec").chain(args.iter().copied()))
    }

    fn report(out: &CliOutcome) -> Value {
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn classify_example() {
        let out = run(&["classify", "--l", "5,3,-1,-3"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let r = report(&out);
        assert_eq!(r["data"]["classification"]["L"], 1);
        assert_eq!(r["data"]["classification"]["N"], json!([4, 2]));
        assert!(!r["data"]["classification"]["nonvanishing_table"].as_array().unwrap().is_empty());
        let out = run(&["classify", "--l", "5,1,-1,-3"]);
        assert_eq!(out.code, 0);
        assert_eq!(report(&out)["data"]["classification"]["shalika"], false);
    }

    #[test]
    fn eigen_example() {
        let out = run(&["verify", "eigen", "--n", "2", "--k", "2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(report(&out)["checks"][0]["status"], "certified_exact");
    }

    #[test]
    fn factorization_example() {
        let out = run(&["verify", "factorization", "--n", "2", "--N", "2,1", "--L", "0", "--l", "0"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(report(&out)["checks"][0]["path"], "exact");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["frobnicate"]).code, 2);
        assert_eq!(run(&["verify", "eigen", "--n", "2", "--k", "5"]).code, 2);
        assert_eq!(run(&["classify"]).code, 2);
        assert_eq!(run(&["classify", "--l", "1,x"]).code, 2);
        assert_eq!(run(&["verify", "phi", "--n", "1", "--samples", "0"]).code, 2);
    }

    #[test]
    fn negative_twist_parses() {
        let out = run(&["verify", "equivariance", "--n", "1", "--N", "2", "--L", "1", "--l", "-2", "--samples", "5"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
    }
}

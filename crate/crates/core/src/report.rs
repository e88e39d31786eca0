//! Machine-readable verification reports.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::unitary_congruence::{CheckPath, CongruenceVerdict, VerdictStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: VerdictStatus,
    pub max_abs_error: f64,
    pub path: CheckPath,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub command: String,
    pub inputs: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    pub overall: Overall,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl VerificationReport {
    pub fn new(command: &str, inputs: serde_json::Value, checks: Vec<CheckRecord>, data: Option<serde_json::Value>) -> Self {
        let overall = if checks.iter().all(|c| c.status != VerdictStatus::Fail) { Overall::Pass } else { Overall::Fail };
        Self { command: command.to_string(), inputs, checks, overall, data }
    }

    pub fn passed(&self) -> bool {
        self.overall == Overall::Pass
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check, for standard error.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = serde_json::to_value(c.status).expect("status serializes");
            out.push_str(&format!(
                "{:<40} {:<16} err={:.3e} ({} ms)\n",
                c.name,
                status.as_str().unwrap_or("?"),
                c.max_abs_error,
                c.elapsed_ms
            ));
        }
        out.push_str(&format!("overall: {}\n", if self.passed() { "pass" } else { "fail" }));
        out
    }
}

/// A named check; `Err` means the check could not run and counts as failed.
pub type CheckFn<'a> = Box<dyn Fn() -> Result<CongruenceVerdict, String> + Send + Sync + 'a>;

/// Runs checks in parallel; records keep declaration order.
pub fn run_checks(checks: Vec<(String, CheckFn<'_>)>) -> (Vec<CheckRecord>, Vec<String>) {
    let results: Vec<(CheckRecord, Option<String>)> = checks
        .par_iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let res = f();
            let elapsed_ms = start.elapsed().as_millis() as u64;
            match res {
                Ok(v) => (
                    CheckRecord { name: name.clone(), status: v.status, max_abs_error: v.max_abs_error, path: v.path, elapsed_ms },
                    None,
                ),
                Err(e) => (
                    CheckRecord {
                        name: name.clone(),
                        status: VerdictStatus::Fail,
                        max_abs_error: 0.0,
                        path: CheckPath::Numeric,
                        elapsed_ms,
                    },
                    Some(format!("{name}: {e}")),
                ),
            }
        })
        .collect();
    let errors = results.iter().filter_map(|(_, e)| e.clone()).collect();
    (results.into_iter().map(|(r, _)| r).collect(), errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_reflects_checks() {
        let ok: CheckFn = Box::new(|| Ok(CongruenceVerdict::exact(0)));
        let bad: CheckFn = Box::new(|| Ok(CongruenceVerdict::numeric(1.0, 3, 1e-9)));
        let (recs, errs) = run_checks(vec![("a".into(), ok), ("b".into(), bad)]);
        assert!(errs.is_empty());
        assert_eq!(recs[0].name, "a");
        let r = VerificationReport::new("t", serde_json::json!({}), recs, None);
        assert_eq!(r.overall, Overall::Fail);
        assert_eq!(r.exit_code(), 1);
        assert!(VerificationReport::new("t", serde_json::json!({}), vec![], None).passed());
    }

    #[test]
    fn errors_count_as_failures() {
        let e: CheckFn = Box::new(|| Err("boom".into()));
        let (recs, errs) = run_checks(vec![("e".into(), e)]);
        assert_eq!(recs[0].status, VerdictStatus::Fail);
        assert_eq!(errs, vec!["e: boom".to_string()]);
    }

    #[test]
    fn json_field_names() {
        let r = VerificationReport::new("x", serde_json::json!({"n": 1}), vec![], None);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["overall"], "pass");
        assert!(v.get("data").is_none());
    }
}

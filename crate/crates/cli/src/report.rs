//! Machine-readable run reports.
//!
//! The JSON rendering is deterministic for a fixed (config, seed): struct
//! field order is fixed, and the only volatile value — the generation
//! timestamp — lives in the single top-level `generated_at` field, so two
//! runs differ in exactly one line. Wall-clock times per case are
//! therefore reported only in the CSV rendering, whose header is
//! `suite,case,residual,tol,pass,seconds`.

use serde::{Deserialize, Serialize};

/// Whether a recorded value must stay below or above its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseResult {
    pub case: String,
    /// Everything needed to replay this case in isolation.
    pub inputs: serde_json::Value,
    pub residual: Option<f64>,
    pub tol: f64,
    pub bound: Bound,
    pub pass: bool,
    pub skipped: bool,
    #[serde(skip)]
    pub seconds: f64,
}

impl CaseResult {
    pub fn evaluate(
        case: impl Into<String>,
        inputs: serde_json::Value,
        residual: f64,
        tol: f64,
        bound: Bound,
        seconds: f64,
    ) -> Self {
        let pass = match bound {
            Bound::Upper => residual < tol,
            Bound::Lower => residual >= tol,
        };
        Self {
            case: case.into(),
            inputs,
            residual: Some(residual),
            tol,
            bound,
            pass,
            skipped: false,
            seconds,
        }
    }

    pub fn skipped(case: impl Into<String>, inputs: serde_json::Value, reason: &str) -> Self {
        Self {
            case: case.into(),
            inputs: serde_json::json!({ "inputs": inputs, "skip_reason": reason }),
            residual: None,
            tol: f64::NAN,
            bound: Bound::Upper,
            pass: true,
            skipped: true,
            seconds: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: Vec<CaseResult>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub sampler: String,
    pub seed: u64,
    pub config_digest: String,
    pub generated_at: String,
    pub suites: Vec<SuiteResult>,
    pub summary: Summary,
}

impl Report {
    pub fn new(seed: u64, config_digest: String, suites: Vec<SuiteResult>) -> Self {
        let total: usize = suites.iter().map(|s| s.cases.len()).sum();
        let skipped = suites
            .iter()
            .flat_map(|s| &s.cases)
            .filter(|c| c.skipped)
            .count();
        let failed = suites
            .iter()
            .flat_map(|s| &s.cases)
            .filter(|c| !c.pass)
            .count();
        Self {
            tool: "qkz-kit".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            sampler: "splitmix64".to_string(),
            seed,
            config_digest,
            generated_at: chrono::Utc::now().to_rfc3339(),
            suites,
            summary: Summary {
                total,
                passed: total - failed,
                failed,
                skipped,
            },
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,case,residual,tol,pass,seconds\n");
        for s in &self.suites {
            for c in &s.cases {
                let residual = c
                    .residual
                    .map(|r| format!("{r:.6e}"))
                    .unwrap_or_else(|| "nan".to_string());
                out.push_str(&format!(
                    "{},{},{},{:.3e},{},{:.6}\n",
                    s.suite, c.case, residual, c.tol, c.pass, c.seconds
                ));
            }
        }
        out
    }

    /// One human line per case.
    pub fn print_summary(&self) {
        for s in &self.suites {
            for c in &s.cases {
                let status = if c.skipped {
                    "SKIP"
                } else if c.pass {
                    "PASS"
                } else {
                    "FAIL"
                };
                let cmp = match c.bound {
                    Bound::Upper => "<",
                    Bound::Lower => ">",
                };
                match c.residual {
                    Some(r) => println!(
                        "[{status}] {}/{}: residual {r:.3e} (want {cmp} {:.1e})",
                        s.suite, c.case, c.tol
                    ),
                    None => println!("[{status}] {}/{}", s.suite, c.case),
                }
            }
        }
        println!(
            "summary: {} cases, {} passed, {} failed, {} skipped",
            self.summary.total, self.summary.passed, self.summary.failed, self.summary.skipped
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        Report::new(
            7,
            "deadbeef".into(),
            vec![SuiteResult {
                suite: "coupling".into(),
                cases: vec![CaseResult::evaluate(
                    "linearity",
                    serde_json::json!({"alpha": 1.0}),
                    1e-14,
                    1e-12,
                    Bound::Upper,
                    0.01,
                )],
            }],
        )
    }

    #[test]
    fn csv_shape() {
        let r = sample_report();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.trim().lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "suite,case,residual,tol,pass,seconds");
        assert!(lines[1].starts_with("coupling,linearity,"));
    }

    #[test]
    fn json_roundtrip_and_single_timestamp() {
        let r = sample_report();
        let json = r.to_json();
        let back = Report::from_json(&json).unwrap();
        assert_eq!(back.suites[0].cases[0].case, "linearity");
        assert_eq!(json.matches("generated_at").count(), 1);
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new(1, "d".into(), vec![]);
        assert_eq!(r.summary.total, 0);
        assert!(r.all_passed());
        assert_eq!(r.to_csv().trim().lines().count(), 1);
    }

    #[test]
    fn lower_bound_cases() {
        let c = CaseResult::evaluate("neg", serde_json::json!({}), 0.99, 0.95, Bound::Lower, 0.0);
        assert!(c.pass);
        let c = CaseResult::evaluate("neg", serde_json::json!({}), 0.5, 0.95, Bound::Lower, 0.0);
        assert!(!c.pass);
    }
}

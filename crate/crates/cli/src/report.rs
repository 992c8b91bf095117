use serde::Serialize;
use wco_core::operators::Verdict;
use wco_core::theorems::CertificateReport;

pub const SCHEMA_VERSION: &str = "wco-report/1";

/// One certified parameter set.
#[derive(Clone, Debug, Serialize)]
pub struct DrawResult {
    pub index: usize,
    /// Constructor rejections the sampler went through before this draw.
    pub rejections: usize,
    /// Why the parameters could not be turned into an operator, if they could not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub report: CertificateReport,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub draws: usize,
    pub draws_passed: usize,
    pub checks: usize,
    pub checks_failed: usize,
    pub constructor_rejections: usize,
    pub failed_check_names: Vec<String>,
}

/// Everything one invocation produced. Fields serialize in declaration
/// order; `duration_seconds` is the only one that varies between identical
/// runs.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub config: serde_json::Value,
    pub results: Vec<DrawResult>,
    pub summary: Summary,
    pub verdict: Verdict,
    pub duration_seconds: f64,
}

impl ReportDocument {
    pub fn new(command: &'static str, config: serde_json::Value, results: Vec<DrawResult>, duration_seconds: f64) -> Self {
        let mut summary = Summary { draws: results.len(), ..Summary::default() };
        for r in &results {
            summary.constructor_rejections += r.rejections;
            if r.report.passed() {
                summary.draws_passed += 1;
            }
            for check in &r.report.checks {
                summary.checks += 1;
                if !check.passed() {
                    summary.checks_failed += 1;
                    if !summary.failed_check_names.contains(&check.name) {
                        summary.failed_check_names.push(check.name.clone());
                    }
                }
            }
        }
        let verdict = Verdict::from_bool(results.iter().all(|r| r.report.passed()));
        Self {
            schema: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            results,
            summary,
            verdict,
            duration_seconds,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

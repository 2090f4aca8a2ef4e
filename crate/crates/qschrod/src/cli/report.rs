//! Machine-readable check report.
//!
//! Check records are deterministic for a given command and input: they carry
//! no timestamps and are sorted by check id. The envelope adds the tool
//! version and a generation timestamp.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One verification record.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    /// Module the check belongs to.
    pub module: &'static str,
    /// Stable identifier, e.g. `relations/space/D,P`.
    pub check_id: String,
    /// Human-readable statement of what the check certifies.
    pub subject: String,
    pub status: Status,
    /// Number of terms left in the residual (0 on pass for exact checks).
    pub residual_terms: usize,
    /// Numeric detail (relative residuals, classifications, errors).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn exact(
        module: &'static str,
        check_id: impl Into<String>,
        subject: impl Into<String>,
        residual_terms: usize,
    ) -> CheckRecord {
        CheckRecord {
            module,
            check_id: check_id.into(),
            subject: subject.into(),
            status: if residual_terms == 0 { Status::Pass } else { Status::Fail },
            residual_terms,
            detail: None,
        }
    }

    pub fn flag(
        module: &'static str,
        check_id: impl Into<String>,
        subject: impl Into<String>,
        pass: bool,
    ) -> CheckRecord {
        CheckRecord {
            module,
            check_id: check_id.into(),
            subject: subject.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual_terms: usize::from(!pass),
            detail: None,
        }
    }

    pub fn numeric(
        module: &'static str,
        check_id: impl Into<String>,
        subject: impl Into<String>,
        relative: f64,
        tol: f64,
    ) -> CheckRecord {
        CheckRecord {
            module,
            check_id: check_id.into(),
            subject: subject.into(),
            status: if relative <= tol { Status::Pass } else { Status::Fail },
            residual_terms: usize::from(relative > tol),
            detail: Some(format!("relative residual {relative:.3e}, tolerance {tol:.1e}")),
        }
    }

    pub fn error(
        module: &'static str,
        check_id: impl Into<String>,
        subject: impl Into<String>,
        err: impl std::fmt::Display,
    ) -> CheckRecord {
        CheckRecord {
            module,
            check_id: check_id.into(),
            subject: subject.into(),
            status: Status::Error,
            residual_terms: 0,
            detail: Some(format!("{err}")),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Report envelope written by `--json`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    /// Unix timestamp of generation; excluded from the per-check records so
    /// those stay byte-identical across runs.
    pub generated_at_unix: u64,
    pub aggregate_pass: bool,
    pub total: usize,
    pub passed: usize,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn from_checks(mut checks: Vec<CheckRecord>) -> Report {
        checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        let passed = checks.iter().filter(|c| c.passed()).count();
        Report {
            schema_version: SCHEMA_VERSION,
            tool: "qschrod",
            version: env!("CARGO_PKG_VERSION"),
            generated_at_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            aggregate_pass: passed == checks.len(),
            total: checks.len(),
            passed,
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

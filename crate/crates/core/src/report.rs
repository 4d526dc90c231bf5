//! Verification reports and their JSON/CSV emission.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{ChaosError, Result};
use crate::suites::RunConfig;

/// One checked property: passes iff `observed <= threshold`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub name: String,
    pub inputs_digest: String,
    pub observed: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CaseRecord {
    pub fn new(
        name: impl Into<String>,
        inputs_digest: String,
        observed: f64,
        threshold: f64,
    ) -> Self {
        Self {
            name: name.into(),
            inputs_digest,
            observed,
            threshold,
            // NaN never passes
            pass: observed <= threshold,
        }
    }
}

/// First 16 hex digits of the SHA-256 of the concatenated parts.
pub fn digest<S: AsRef<str>>(parts: &[S]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update(part.as_ref().as_bytes());
        hasher.update([0u8]);
    }
    hex::encode(hasher.finalize())[..16].to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: RunConfig,
    pub cases: Vec<CaseRecord>,
    pub pass: bool,
    /// Set when there were no cases to check.
    pub vacuous: bool,
    pub seed: u64,
    /// Wall time, recorded only when the config asks for timing.
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(config: RunConfig, cases: Vec<CaseRecord>) -> Self {
        let pass = cases.iter().all(|c| c.pass);
        Self {
            suite: config.suite.clone(),
            seed: config.seed,
            vacuous: cases.is_empty(),
            pass,
            cases,
            config,
            runtime_ms: None,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> + '_ {
        self.cases.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = ChaosError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(ChaosError::InvalidConfig(format!(
                "unknown report format {other:?}"
            ))),
        }
    }
}

pub fn emit_report(report: &VerificationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "suite",
                "case",
                "inputs_digest",
                "observed",
                "threshold",
                "pass",
            ])?;
            for c in &report.cases {
                w.write_record([
                    report.suite.as_str(),
                    c.name.as_str(),
                    c.inputs_digest.as_str(),
                    &c.observed.to_string(),
                    &c.threshold.to_string(),
                    if c.pass { "true" } else { "false" },
                ])?;
            }
            let bytes = w.into_inner().map_err(|e| ChaosError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn write_report(report: &VerificationReport, format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, emit_report(report, format)?)?;
    Ok(())
}

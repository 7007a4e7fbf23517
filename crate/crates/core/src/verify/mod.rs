//! Named, machine-checkable claims about the family, run over a suite of
//! configurations and collected into a deterministic report.

mod claims;

use crate::chain::{classify_regime, PorismConfig, Regime};
use crate::error::PorismError;
use crate::tolerance::ToleranceSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub use claims::homothetic_polar_residuals;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// A printed statement disagrees with its numeric oracle while the
    /// numeric cross-checks agree with each other.
    #[serde(rename = "SUSPECTED_TYPO")]
    SuspectedTypo,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::SuspectedTypo => "SUSPECTED_TYPO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub id: String,
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

/// Outcome of a single claim before it is labelled with its id.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub residual: f64,
    pub tolerance: f64,
    pub status: Status,
    pub note: String,
}

impl Outcome {
    pub fn judge(residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Self { residual, tolerance, status, note: String::new() }
    }

    /// `printed` compares a printed statement with the numeric oracle;
    /// `cross` compares two numeric constructions with each other.
    pub fn printed(printed: f64, cross: f64, tolerance: f64) -> Self {
        let status = match (printed <= tolerance, cross <= tolerance) {
            (true, true) => Status::Pass,
            (false, true) => Status::SuspectedTypo,
            _ => Status::Fail,
        };
        Self { residual: printed, tolerance, status, note: String::new() }
    }

    pub fn fail(note: impl Into<String>) -> Self {
        Self { residual: f64::INFINITY, tolerance: 0.0, status: Status::Fail, note: note.into() }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Configurations and sampling density shared by every claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub configs: Vec<PorismConfig>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub tolerances: ToleranceSet,
}

fn default_samples() -> usize {
    360
}

impl Suite {
    pub fn new(configs: Vec<PorismConfig>, samples: usize, tolerances: ToleranceSet) -> Self {
        Self { configs, samples, tolerances }
    }

    /// For every N in 3..=8: an ellipse member on each side of the annulus,
    /// both parabolic members and a hyperbola member; plus centered members
    /// for N = 3 and N = 5 and further N = 3 ellipse and hyperbola members.
    pub fn default_suite() -> Self {
        let mut configs = Vec::new();
        for n in 3..=8usize {
            let s = (std::f64::consts::PI / n as f64).sin();
            let mk = |r: f64, x0: f64, l: f64| PorismConfig::new(n, r, x0, l).expect("default suite member");
            configs.push(mk(1.0, 0.5 * (1.0 - s), 1.0));
            configs.push(mk(1.3, 1.3 * (1.0 + s) + 0.5, 0.8));
            configs.push(PorismConfig::parabolic(n, 1.0, 1.0, false).expect("default suite member"));
            configs.push(PorismConfig::parabolic(n, 1.0, 0.7, true).expect("default suite member"));
            configs.push(mk(1.0, 1.0 + 0.4 * s, 1.0));
        }
        configs.push(PorismConfig::new(3, 1.0, 0.1, 1.0).expect("default suite member"));
        configs.push(PorismConfig::new(3, 1.0, 0.7, 1.0).expect("default suite member"));
        configs.push(PorismConfig::new(3, 1.0, 0.0, 1.0).expect("default suite member"));
        configs.push(PorismConfig::new(5, 1.2, 0.0, 0.9).expect("default suite member"));
        Self { configs, samples: default_samples(), tolerances: ToleranceSet::default() }
    }

    pub fn regime(&self, cfg: &PorismConfig) -> Regime {
        classify_regime(cfg, &self.tolerances)
    }

    /// Regimes and sizes missing from the suite, as readable strings.
    pub fn coverage_gaps(&self) -> Vec<String> {
        let mut gaps = Vec::new();
        for r in [Regime::Ellipse, Regime::Parabola, Regime::Hyperbola] {
            if !self.configs.iter().any(|c| self.regime(c) == r) {
                gaps.push(format!("no {r:?} member"));
            }
        }
        for n in 3..=8 {
            if !self.configs.iter().any(|c| c.n() == n) {
                gaps.push(format!("no N = {n} member"));
            }
        }
        gaps
    }
}

/// A registered claim: id, the quoted statement it checks, and its check.
pub struct Claim {
    pub id: &'static str,
    pub anchor: &'static str,
    pub run: fn(&Suite) -> Outcome,
}

/// All claims, sorted by id.
pub fn registry() -> &'static [Claim] {
    claims::CLAIMS
}

pub fn claim_ids() -> Vec<&'static str> {
    registry().iter().map(|c| c.id).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<ClaimRecord>,
    /// Claims evaluated.
    pub coverage: usize,
    /// Claims registered.
    pub registered: usize,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// The records as a JSON array of `{id, anchor, residual, tolerance, status}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records).expect("records serialize")
    }

    pub fn to_table(&self) -> String {
        let w = self.records.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        let mut s = String::new();
        let _ = writeln!(s, "{:<w$}  {:<14}  {:>12}  {:>10}  anchor", "id", "status", "residual", "tolerance");
        for r in &self.records {
            let _ = writeln!(
                s,
                "{:<w$}  {:<14}  {:>12.3e}  {:>10.1e}  {}",
                r.id,
                r.status.to_string(),
                r.residual,
                r.tolerance,
                r.anchor
            );
            if !r.note.is_empty() {
                let _ = writeln!(s, "{:<w$}  {}", "", r.note);
            }
        }
        let _ = writeln!(s, "coverage {}/{}, failures {}", self.coverage, self.registered, self.failures());
        s
    }
}

/// Runs every registered claim. The suite must cover all three regimes and
/// N = 3..=8.
pub fn verify_all(suite: &Suite) -> Result<VerificationReport, PorismError> {
    let gaps = suite.coverage_gaps();
    if !gaps.is_empty() {
        return Err(PorismError::InvalidConfig(format!("suite does not cover: {}", gaps.join(", "))));
    }
    Ok(run_claims(suite, registry().iter().collect()))
}

/// Runs the claims with the given ids, in id order.
pub fn verify_only(suite: &Suite, ids: &[&str]) -> Result<VerificationReport, PorismError> {
    let mut selected = Vec::new();
    for id in ids {
        let c = registry()
            .iter()
            .find(|c| c.id == *id)
            .ok_or_else(|| PorismError::InvalidConfig(format!("unknown claim id {id:?}")))?;
        if !selected.iter().any(|s: &&Claim| s.id == c.id) {
            selected.push(c);
        }
    }
    Ok(run_claims(suite, selected))
}

fn run_claims(suite: &Suite, mut claims: Vec<&Claim>) -> VerificationReport {
    claims.sort_by_key(|c| c.id);
    let records: Vec<ClaimRecord> = claims
        .par_iter()
        .map(|c| {
            let o = (c.run)(suite);
            ClaimRecord {
                id: c.id.to_string(),
                anchor: c.anchor.to_string(),
                residual: o.residual,
                tolerance: o.tolerance,
                status: o.status,
                note: o.note,
            }
        })
        .collect();
    VerificationReport { coverage: records.len(), registered: registry().len(), records }
}

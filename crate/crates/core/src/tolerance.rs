//! Numeric tolerances shared by fits, classification and the verification harness.
//!
//! All fit residuals are measured in the normalized frame (points shifted to
//! zero mean and scaled to unit RMS radius), so the same thresholds apply to
//! configurations of any size.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceSet {
    /// Identity checks on constructed geometry (tangency, concyclicity, round trips).
    pub geometry: f64,
    /// Discriminant / circularity tests on unit-norm conic coefficients.
    pub classification: f64,
    /// A curve passes through the inversion center when its distance to it is below `lambda * through_center`.
    pub through_center: f64,
    /// Relative separation required between the two smallest singular values of a conic fit.
    pub rank_separation: f64,
    pub stationary: f64,
    pub segment: f64,
    pub circle: f64,
    pub conic: f64,
    /// Relative deviation allowed for a conserved quantity over a sweep.
    pub invariant: f64,
    /// Denominator floor for relative deviations.
    pub floor: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            geometry: 1e-10,
            classification: 1e-7,
            through_center: 1e-9,
            rank_separation: 1e-9,
            stationary: 1e-9,
            segment: 1e-8,
            circle: 1e-7,
            conic: 1e-6,
            invariant: 1e-8,
            floor: 1e-30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Default,
    Strict,
}

impl Profile {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "default" | "" => Some(Profile::Default),
            "strict" => Some(Profile::Strict),
            _ => None,
        }
    }
}

impl ToleranceSet {
    pub fn for_profile(profile: Profile) -> Self {
        match profile {
            Profile::Default => Self::default(),
            Profile::Strict => Self::strict(),
        }
    }

    /// Fit and invariant thresholds ten times tighter than the defaults.
    pub fn strict() -> Self {
        let d = Self::default();
        Self {
            geometry: d.geometry / 10.0,
            stationary: d.stationary / 10.0,
            segment: d.segment / 10.0,
            circle: d.circle / 10.0,
            conic: d.conic / 10.0,
            invariant: d.invariant / 10.0,
            ..d
        }
    }

    /// `max_abs_deviation / max(|mean|, floor)`.
    pub fn relative(&self, deviation: f64, mean: f64) -> f64 {
        deviation / mean.abs().max(self.floor)
    }
}

//! The regular pre-image configuration and its inversive image, the Steiner
//! chain, at any phase of the porism.

pub mod closed_form;

use crate::error::PorismError;
use crate::geom::{invert_gcircle_with, invert_point, Circle, GCircle, Point};
use crate::tolerance::ToleranceSet;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The four scalars that determine the porism: chain length `n`, pre-image
/// circumradius `r`, inversion center `(x0, 0)` and inversion radius `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PorismConfig {
    n: usize,
    r: f64,
    x0: f64,
    lambda: f64,
}

#[derive(Deserialize)]
struct RawConfig {
    n: usize,
    r: f64,
    x0: f64,
    lambda: f64,
}

impl<'de> Deserialize<'de> for PorismConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawConfig::deserialize(d)?;
        PorismConfig::new(raw.n, raw.r, raw.x0, raw.lambda).map_err(serde::de::Error::custom)
    }
}

impl PorismConfig {
    /// Validates and canonicalizes `x0 >= 0`.
    pub fn new(n: usize, r: f64, x0: f64, lambda: f64) -> Result<Self, PorismError> {
        if n < 3 {
            return Err(PorismError::InvalidConfig(format!("N must be at least 3, got {n}")));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(PorismError::InvalidConfig(format!("R must be positive and finite, got {r}")));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(PorismError::InvalidConfig(format!("lambda must be positive and finite, got {lambda}")));
        }
        if !x0.is_finite() {
            return Err(PorismError::InvalidConfig(format!("x0 must be finite, got {x0}")));
        }
        let x0 = x0.abs();
        let cfg = Self { n, r, x0, lambda };
        if (x0 - r * cfg.alpha().cos()).abs() <= 1e-9 * r {
            return Err(PorismError::InvalidConfig(format!(
                "x0 = R cos(pi/N) puts the inversion center on the incircle; the caustic degenerates (x0 = {x0})"
            )));
        }
        Ok(cfg)
    }

    /// Config with the inversion center on the inner (`outer = false`) or
    /// outer pre-image Soddy circle, where the outer conic is a parabola.
    pub fn parabolic(n: usize, r: f64, lambda: f64, outer: bool) -> Result<Self, PorismError> {
        let s = (PI / n.max(1) as f64).sin();
        Self::new(n, r, if outer { r * (1.0 + s) } else { r * (1.0 - s) }, lambda)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        PI / self.n as f64
    }

    pub fn inversion_circle(&self) -> Circle {
        Circle::new(Point::new(self.x0, 0.0), self.lambda)
    }

    /// Phase period: the porism repeats after a rotation by `2 pi / N`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Phase of sample `j` out of `samples`, offset by half a step.
    pub fn sample_phase(&self, j: usize, samples: usize) -> f64 {
        (j as f64 + 0.5) * self.period() / samples as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Ellipse,
    Parabola,
    Hyperbola,
}

/// Regime from the position of the inversion center relative to the two
/// pre-image Soddy circles.
pub fn classify_regime(cfg: &PorismConfig, tol: &ToleranceSet) -> Regime {
    let s = cfg.alpha().sin();
    let (inner, outer) = (cfg.r * (1.0 - s), cfg.r * (1.0 + s));
    let eps = cfg.lambda * tol.through_center;
    if (cfg.x0 - inner).abs() < eps || (cfg.x0 - outer).abs() < eps {
        Regime::Parabola
    } else if cfg.x0 < inner || cfg.x0 > outer {
        Regime::Ellipse
    } else {
        Regime::Hyperbola
    }
}

/// The phase-free regular configuration before inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularPreImage {
    pub chain: Vec<Circle>,
    pub incircle: Circle,
    pub soddy_inner: Circle,
    pub soddy_outer: Circle,
}

pub fn regular_preimage(cfg: &PorismConfig) -> RegularPreImage {
    preimage_at(cfg, 0.0)
}

fn preimage_at(cfg: &PorismConfig, t: f64) -> RegularPreImage {
    let (s, c) = cfg.alpha().sin_cos();
    let chain = (0..cfg.n).map(|k| Circle::new(Point::polar(cfg.r, t + k as f64 * cfg.period()), cfg.r * s)).collect();
    RegularPreImage {
        chain,
        incircle: Circle::new(Point::ORIGIN, cfg.r * c),
        soddy_inner: Circle::new(Point::ORIGIN, cfg.r * (1.0 - s)),
        soddy_outer: Circle::new(Point::ORIGIN, cfg.r * (1.0 + s)),
    }
}

/// The chain at phase `t`: images of the rotated pre-image.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerChain {
    pub phase: f64,
    pub circles: Vec<Circle>,
    /// `contacts[i]` is the tangency point of circles `i` and `i + 1`.
    pub contacts: Vec<Point>,
    pub soddy_inner: GCircle,
    pub soddy_outer: GCircle,
    pub caustic: Circle,
    /// Signed curvatures `(d^2 - rho^2) / (lambda^2 rho)` of the chain
    /// circles; negative for the circle whose pre-image contains the
    /// inversion center.
    pub signed_curvatures: Vec<f64>,
}

impl SteinerChain {
    /// Index of the chain circle whose pre-image contains the inversion center.
    pub fn distal(&self) -> Option<usize> {
        self.signed_curvatures.iter().position(|k| *k < 0.0)
    }

    pub fn centers(&self) -> Vec<Point> {
        self.circles.iter().map(|c| c.center).collect()
    }
}

pub fn chain_at(cfg: &PorismConfig, t: f64) -> Result<SteinerChain, PorismError> {
    chain_at_with(cfg, t, &ToleranceSet::default())
}

pub fn chain_at_with(cfg: &PorismConfig, t: f64, tol: &ToleranceSet) -> Result<SteinerChain, PorismError> {
    let pre = preimage_at(cfg, t);
    let inv = cfg.inversion_circle();
    let o = inv.center;
    let l2 = cfg.lambda * cfg.lambda;
    let eps = cfg.lambda * tol.through_center;
    let mut circles = Vec::with_capacity(cfg.n);
    let mut signed_curvatures = Vec::with_capacity(cfg.n);
    for (index, c) in pre.chain.iter().enumerate() {
        let d = c.center.distance(o);
        if (d - c.radius).abs() < eps {
            return Err(PorismError::DegenerateChainCircle { index, phase: t });
        }
        let den = d * d - c.radius * c.radius;
        circles.push(Circle::new(o + (c.center - o) * (l2 / den), l2 * c.radius / den.abs()));
        signed_curvatures.push(den / (l2 * c.radius));
    }
    let cos_a = cfg.alpha().cos();
    let contacts = (0..cfg.n)
        .map(|k| invert_point(Point::polar(cfg.r * cos_a, t + k as f64 * cfg.period() + cfg.alpha()), &inv))
        .collect::<Result<Vec<_>, _>>()?;
    let image = |c: &Circle| invert_gcircle_with(&GCircle::Circle(*c), &inv, tol.through_center);
    let caustic = match image(&pre.incircle) {
        GCircle::Circle(c) => c,
        GCircle::Line(_) => return Err(PorismError::CausticSingular),
    };
    Ok(SteinerChain {
        phase: t,
        circles,
        contacts,
        soddy_inner: image(&pre.soddy_inner),
        soddy_outer: image(&pre.soddy_outer),
        caustic,
        signed_curvatures,
    })
}

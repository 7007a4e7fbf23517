//! Conserved quantities of the family and the reports that track them over
//! a phase sweep.

use crate::centers::Triangle;
use crate::chain::{chain_at_with, PorismConfig, SteinerChain};
use crate::error::{GeomError, PorismError};
use crate::geom::{GCircle, Line, Point, Polygon};
use crate::porism::{centroids, signed_perimeter_centroid};
use crate::tolerance::ToleranceSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which half-tangents change sign when the polygon straddles both branches
/// of a hyperbola.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SignRule {
    /// Only the vertex on the far branch (the chain circle whose pre-image
    /// contains the inversion center) is negated.
    #[default]
    DistalVertex,
    /// The two vertices adjacent to the far-branch vertex are negated.
    NeighborPair,
}

/// Angle at each vertex between the two side lines, measured in the sector
/// that contains `center`.
pub fn sector_angles(poly: &Polygon, center: Point) -> Vec<f64> {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let v = poly.vertex(i);
            let u = poly.vertex(i + n - 1) - v;
            let w = poly.vertex(i + 1) - v;
            let g = u.cross(w).abs().atan2(u.dot(w));
            let d = center - v;
            let det = u.cross(w);
            let (a, b) = (d.cross(w) / det, u.cross(d) / det);
            if a * b >= 0.0 {
                g
            } else {
                PI - g
            }
        })
        .collect()
}

/// `+1` or `-1` per vertex.
pub fn signs(chain: &SteinerChain, rule: SignRule) -> Vec<f64> {
    let n = chain.circles.len();
    let mut s = vec![1.0; n];
    if let Some(d) = chain.distal() {
        match rule {
            SignRule::DistalVertex => s[d] = -1.0,
            SignRule::NeighborPair => {
                s[(d + 1) % n] = -1.0;
                s[(d + n - 1) % n] = -1.0;
            }
        }
    }
    s
}

fn polygon_of(chain: &SteinerChain) -> Result<Polygon, GeomError> {
    Polygon::new(chain.centers(), 0.0)
}

/// `sum_i (s_i tan(theta_i / 2))^k` with angles from the vertex geometry.
pub fn half_tangent_sum(chain: &SteinerChain, k: i32, rule: SignRule) -> Result<f64, PorismError> {
    let poly = polygon_of(chain)?;
    let th = sector_angles(&poly, chain.caustic.center);
    let s = signs(chain, rule);
    Ok(th.iter().zip(&s).map(|(t, s)| (s * (0.5 * t).tan()).powi(k)).sum())
}

/// `sum_i (s_i r / r_i)^k` from the radii.
pub fn half_tangent_sum_from_radii(chain: &SteinerChain, k: i32, rule: SignRule) -> f64 {
    let r = chain.caustic.radius;
    let s = signs(chain, rule);
    chain.circles.iter().zip(&s).map(|(c, s)| (s * r / c.radius).powi(k)).sum()
}

/// `sum_i kappa_i^k` over the signed curvatures of the chain circles.
pub fn curvature_power_sum(chain: &SteinerChain, k: i32) -> f64 {
    chain.signed_curvatures.iter().map(|c| c.powi(k)).sum()
}

/// Signed curvatures `(k4, k5)` of the images of the inner and outer
/// pre-image Soddy circles; zero for a line.
///
/// The pre-image orientation (inner circle positive, enclosing outer circle
/// negative) is carried through the inversion: it flips when the inversion
/// center lies inside the pre-image circle. A negative image curvature means
/// the circle encloses the chain circles it touches positively.
pub fn soddy_curvatures(cfg: &PorismConfig, chain: &SteinerChain) -> (f64, f64) {
    let s = cfg.alpha().sin();
    let image = |g: &GCircle, rho: f64, orientation: f64| match g {
        GCircle::Line(_) => 0.0,
        GCircle::Circle(c) => orientation * (cfg.x0() - rho).signum() * (cfg.x0() + rho).signum() / c.radius,
    };
    (image(&chain.soddy_inner, cfg.r() * (1.0 - s), 1.0), image(&chain.soddy_outer, cfg.r() * (1.0 + s), -1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescartesCheck {
    /// `1 / rho = sum_i kappa_i`.
    pub inv_rho: f64,
    pub k4: f64,
    pub k5: f64,
    /// `|1/rho - (k4 + k5) / 2|`.
    pub residual: f64,
    /// `residual / |1/rho|`.
    pub relative: f64,
}

/// Descartes check for a three-circle chain and its two Soddy images.
pub fn descartes_check(cfg: &PorismConfig, chain: &SteinerChain) -> Result<DescartesCheck, PorismError> {
    if chain.circles.len() != 3 {
        return Err(PorismError::InvalidConfig("Descartes check needs N = 3".into()));
    }
    let inv_rho: f64 = chain.circles.iter().zip(&chain.signed_curvatures).map(|(c, k)| k.signum() / c.radius).sum();
    let (k4, k5) = soddy_curvatures(cfg, chain);
    let residual = (inv_rho - 0.5 * (k4 + k5)).abs();
    Ok(DescartesCheck { inv_rho, k4, k5, residual, relative: residual / inv_rho.abs() })
}

/// Feet of the perpendiculars from `p` to the sides opposite `a`, `b`, `c`.
pub fn pedal_triangle(tri: &Triangle, p: Point) -> Triangle {
    let foot = |u: Point, v: Point| Line::through(u, v).foot(p);
    Triangle { a: foot(tri.b, tri.c), b: foot(tri.c, tri.a), c: foot(tri.a, tri.b) }
}

/// `(sum_i (s_i tan(theta_i / 2))^k, sum_i cot^k(phi_i))`, where `theta_i`
/// are the angles of `tri` in the sectors containing `center` and `phi_i` is
/// the angle of `pedal` at its vertex opposite `tri`'s vertex `i`. An obtuse
/// pedal angle contributes its (negative) cotangent.
pub fn pedal_cot_sums(tri: &Triangle, pedal: &Triangle, center: Point, signs: [f64; 3], k: i32) -> (f64, f64) {
    let poly = Polygon::new(tri.vertices().to_vec(), 0.0).expect("triangle");
    let th = sector_angles(&poly, center);
    let ps = pedal.shape();
    let phi = [ps.angle_a, ps.angle_b, ps.angle_c];
    let lhs = (0..3).map(|i| (signs[i] * (0.5 * th[i]).tan()).powi(k)).sum();
    let rhs = (0..3).map(|i| (1.0 / phi[i].tan()).powi(k)).sum();
    (lhs, rhs)
}

/// Pedal-cotangent identity for the triangle of a three-circle chain.
pub fn chain_pedal_cot_sums(chain: &SteinerChain, rule: SignRule, k: i32) -> Result<(f64, f64), PorismError> {
    let c = chain.centers();
    let tri = Triangle { a: c[0], b: c[1], c: c[2] };
    let s = signs(chain, rule);
    let i = chain.caustic.center;
    Ok(pedal_cot_sums(&tri, &pedal_triangle(&tri, i), i, [s[0], s[1], s[2]], k))
}

/// Collinearity of `(I, C2, C1)` as the sine of the angle at `I`, and
/// `| |C1 - I| / |C2 - I| - 3/2 |`.
///
/// `C1` is the perimeter centroid with side lengths signed by orientation
/// about `I` (see [`signed_perimeter_centroid`]), which keeps the identity
/// when `I` falls outside the polygon.
pub fn centroid_ratio_check(poly: &Polygon, incenter: Point) -> Result<(f64, f64), PorismError> {
    let (_, _, c2) = centroids(poly)?;
    let c1 = signed_perimeter_centroid(poly, incenter)?;
    let (u, v) = (c1 - incenter, c2 - incenter);
    let scale = poly.vertices().iter().map(|p| p.distance(incenter)).fold(0.0, f64::max);
    if v.norm() <= 1e-12 * scale || u.norm() <= 1e-12 * scale {
        return Err(PorismError::RatioUndefined);
    }
    Ok(((u.cross(v) / (u.norm() * v.norm())).abs(), (u.norm() / v.norm() - 1.5).abs()))
}

/// Summary of a quantity evaluated along a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub name: String,
    pub k: i32,
    pub samples: usize,
    pub mean: f64,
    pub max_abs_deviation: f64,
    pub relative_deviation: f64,
    pub pass: bool,
}

impl InvariantReport {
    pub fn from_values(name: impl Into<String>, k: i32, values: &[f64], tol: &ToleranceSet) -> Self {
        let n = values.len();
        let mean = if n == 0 { f64::NAN } else { values.iter().sum::<f64>() / n as f64 };
        let max_abs_deviation = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
        let relative_deviation = tol.relative(max_abs_deviation, mean);
        Self {
            name: name.into(),
            k,
            samples: n,
            mean,
            max_abs_deviation,
            relative_deviation,
            pass: n > 0 && relative_deviation < tol.invariant,
        }
    }
}

/// Chains at `samples` evenly spaced phases, skipping degenerate phases.
pub fn sweep_chains(cfg: &PorismConfig, samples: usize, tol: &ToleranceSet) -> Vec<SteinerChain> {
    (0..samples).into_par_iter().filter_map(|j| chain_at_with(cfg, cfg.sample_phase(j, samples), tol).ok()).collect()
}

/// Half-tangent power sums `k = 1..=N-1` over a sweep.
pub fn half_tangent_reports(
    cfg: &PorismConfig,
    samples: usize,
    rule: SignRule,
    tol: &ToleranceSet,
) -> Result<Vec<InvariantReport>, PorismError> {
    let chains = sweep_chains(cfg, samples, tol);
    (1..cfg.n() as i32)
        .map(|k| {
            let v = chains.iter().map(|c| half_tangent_sum(c, k, rule)).collect::<Result<Vec<_>, _>>()?;
            Ok(InvariantReport::from_values("half_tangent_sum", k, &v, tol))
        })
        .collect()
}

/// Signed curvature power sums `k = 1..=N-1` over a sweep.
pub fn curvature_reports(cfg: &PorismConfig, samples: usize, tol: &ToleranceSet) -> Vec<InvariantReport> {
    let chains = sweep_chains(cfg, samples, tol);
    (1..cfg.n() as i32)
        .map(|k| {
            let v: Vec<f64> = chains.iter().map(|c| curvature_power_sum(c, k)).collect();
            InvariantReport::from_values("curvature_power_sum", k, &v, tol)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::chain_at;

    fn cfg(n: usize, x0: f64) -> PorismConfig {
        PorismConfig::new(n, 1.0, x0, 1.0).unwrap()
    }

    #[test]
    fn equilateral_half_tangent_sum() {
        let ch = chain_at(&cfg(3, 0.0), 0.3).unwrap();
        assert!((half_tangent_sum(&ch, 1, SignRule::default()).unwrap() - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn angle_and_radius_forms_agree() {
        for (n, x0) in [(3, 0.1), (3, 0.7), (4, 1.0), (5, 0.3), (6, 2.5), (7, 0.9)] {
            let c = cfg(n, x0);
            for j in 0..30 {
                let Ok(ch) = chain_at(&c, c.sample_phase(j, 30)) else { continue };
                let r = ch.caustic.radius;
                let poly = polygon_of(&ch).unwrap();
                let th = sector_angles(&poly, ch.caustic.center);
                for (t, circle) in th.iter().zip(&ch.circles) {
                    assert!(((0.5 * t).tan() - r / circle.radius).abs() < 1e-9 * (r / circle.radius).max(1.0));
                }
                for k in 1..n as i32 {
                    let a = half_tangent_sum(&ch, k, SignRule::DistalVertex).unwrap();
                    let b = half_tangent_sum_from_radii(&ch, k, SignRule::DistalVertex);
                    assert!((a - b).abs() < 1e-8 * b.abs().max(1.0), "n={n} x0={x0} k={k}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn descartes_on_unit_circles() {
        // three unit circles with centers at the vertices of an equilateral triangle of side 2
        let inv_rho = 3.0;
        let disc = 2.0 * 3f64.sqrt();
        let (k4, k5) = (3.0 + disc, 3.0 - disc);
        assert!((inv_rho - 0.5f64 * (k4 + k5)).abs() < 1e-15);
        let c = cfg(3, 0.0);
        let ch = chain_at(&c, 0.1).unwrap();
        assert!(descartes_check(&c, &ch).unwrap().residual < 1e-12);
    }

    #[test]
    fn parabola_regime_descartes_and_tau() {
        let c = PorismConfig::parabolic(3, 1.0, 1.0, false).unwrap();
        let ch = chain_at(&c, 0.4).unwrap();
        let d = descartes_check(&c, &ch).unwrap();
        assert_eq!(d.k4, 0.0);
        assert!((ch.caustic.radius * d.inv_rho - 2.0).abs() < 1e-10);
        assert!((half_tangent_sum(&ch, 1, SignRule::default()).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn pedal_cot_equilateral() {
        let t = Triangle::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, 0.75f64.sqrt())).unwrap();
        let i = t.incircle().center;
        let p = pedal_triangle(&t, i);
        let (l1, r1) = pedal_cot_sums(&t, &p, i, [1.0; 3], 1);
        assert!((l1 - 3f64.sqrt()).abs() < 1e-14 && (r1 - 3f64.sqrt()).abs() < 1e-14);
        let (l2, r2) = pedal_cot_sums(&t, &p, i, [1.0; 3], 2);
        assert!((l2 - 1.0).abs() < 1e-14 && (r2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn centroid_ratio_on_tangential_quadrilateral() {
        // quadrilateral circumscribing the unit circle: tangent lines at four angles
        let angles = [0.1, 1.7, 3.0, 4.4];
        let lines: Vec<Line> =
            angles.iter().map(|a| Line::with_normal(Point::polar(1.0, *a), Point::polar(1.0, *a))).collect();
        let v: Vec<Point> = (0..4).map(|i| lines[(i + 3) % 4].intersect(&lines[i]).unwrap()).collect();
        let poly = Polygon::new(v, 1e-12).unwrap();
        let (col, ratio) = centroid_ratio_check(&poly, Point::ORIGIN).unwrap();
        assert!(col < 1e-9 && ratio < 1e-9);
        let reg: Vec<Point> = (0..5).map(|i| Point::polar(1.0, i as f64 * 2.0 * PI / 5.0)).collect();
        let reg = Polygon::new(reg, 1e-12).unwrap();
        assert_eq!(centroid_ratio_check(&reg, Point::ORIGIN), Err(PorismError::RatioUndefined));
    }
}

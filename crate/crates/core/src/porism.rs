//! The Poncelet family: polygons of centers, pedal (harmonic) polygons,
//! branch states, centroids and the homothetic family's polar images.

use crate::chain::{chain_at_with, classify_regime, PorismConfig, Regime, SteinerChain};
use crate::error::{GeomError, PorismError};
use crate::geom::{polar_line, pole_point, Circle, ConicFit, GCircle, Point, Polygon};
use crate::tolerance::ToleranceSet;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn scale_of(points: &[Point]) -> f64 {
    points.iter().map(|p| p.norm()).fold(1.0, f64::max)
}

fn polygon(points: Vec<Point>, tol: &ToleranceSet) -> Result<Polygon, GeomError> {
    let eps = tol.geometry * scale_of(&points);
    Polygon::new(points, eps)
}

/// Polygon of chain-circle centers at phase `t`.
pub fn polygon_at(cfg: &PorismConfig, t: f64) -> Result<Polygon, PorismError> {
    polygon_at_with(cfg, t, &ToleranceSet::default())
}

pub fn polygon_at_with(cfg: &PorismConfig, t: f64, tol: &ToleranceSet) -> Result<Polygon, PorismError> {
    let chain = chain_at_with(cfg, t, tol)?;
    Ok(polygon(chain.centers(), tol)?)
}

/// Feet of the perpendiculars from `p` to the side lines of `poly`.
pub fn pedal_feet(poly: &Polygon, p: Point) -> Vec<Point> {
    poly.side_lines().iter().map(|l| l.foot(p)).collect()
}

/// Polygon of contact points, cross-checked against the pedal of the
/// polygon of centers with respect to the caustic center.
pub fn pedal_polygon_at(cfg: &PorismConfig, t: f64) -> Result<Polygon, PorismError> {
    pedal_polygon_at_with(cfg, t, &ToleranceSet::default())
}

pub fn pedal_polygon_at_with(cfg: &PorismConfig, t: f64, tol: &ToleranceSet) -> Result<Polygon, PorismError> {
    let chain = chain_at_with(cfg, t, tol)?;
    pedal_from_chain(&chain, tol)
}

pub(crate) fn pedal_from_chain(chain: &SteinerChain, tol: &ToleranceSet) -> Result<Polygon, PorismError> {
    let centers = polygon(chain.centers(), tol)?;
    let feet = pedal_feet(&centers, chain.caustic.center);
    let gap = feet.iter().zip(&chain.contacts).map(|(a, b)| a.distance(*b)).fold(0.0, f64::max);
    let scale = scale_of(centers.vertices()).max(scale_of(&chain.contacts));
    if gap > 1e3 * tol.geometry * scale {
        return Err(GeomError::PedalMismatch(gap).into());
    }
    Ok(polygon(chain.contacts.clone(), tol)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchState {
    SingleBranch,
    SplitBranch,
    NotHyperbola,
}

/// Which hyperbola branches carry the vertices at phase `t`.
///
/// The hyperbola's center is the midpoint of its foci (the Soddy image
/// centers) and its transverse axis is the x-axis; each vertex is assigned
/// by the sign of its abscissa relative to the center.
pub fn branch_state(cfg: &PorismConfig, t: f64, tol: &ToleranceSet) -> Result<BranchState, PorismError> {
    if classify_regime(cfg, tol) != Regime::Hyperbola {
        return Ok(BranchState::NotHyperbola);
    }
    let chain = chain_at_with(cfg, t, tol)?;
    Ok(branch_state_of(&chain))
}

pub(crate) fn branch_state_of(chain: &SteinerChain) -> BranchState {
    let (GCircle::Circle(a), GCircle::Circle(b)) = (chain.soddy_inner, chain.soddy_outer) else {
        return BranchState::NotHyperbola;
    };
    let cx = 0.5 * (a.center.x + b.center.x);
    let right = chain.circles.iter().filter(|c| c.center.x > cx).count();
    let minority = right.min(chain.circles.len() - right);
    if minority == 0 {
        BranchState::SingleBranch
    } else {
        BranchState::SplitBranch
    }
}

/// Vertex, perimeter and area centroids.
pub fn centroids(poly: &Polygon) -> Result<(Point, Point, Point), GeomError> {
    let n = poly.len();
    let c0 = Point::centroid(poly.vertices());
    let perimeter = poly.perimeter();
    if !(perimeter > 0.0) {
        return Err(GeomError::ZeroPerimeter);
    }
    let c1 = (0..n).fold(Point::ORIGIN, |acc, i| {
        let (p, q) = poly.side(i);
        acc + p.midpoint(q) * p.distance(q)
    }) / perimeter;
    let area = poly.signed_area();
    let scale = poly.vertices().iter().map(|p| (*p - c0).norm_sq()).fold(0.0, f64::max);
    if area.abs() <= 1e-14 * scale {
        return Err(GeomError::ZeroArea);
    }
    let c2 = (0..n).fold(Point::ORIGIN, |acc, i| {
        let (p, q) = poly.side(i);
        acc + (p + q) * p.cross(q)
    }) / (6.0 * area);
    Ok((c0, c1, c2))
}

/// Perimeter centroid of a polygon tangent to a circle centered at `center`,
/// with each side length signed by the orientation of the triangle
/// `(center, v_i, v_{i+1})` relative to the polygon. Equals the plain
/// perimeter centroid when `center` is inside a convex polygon.
pub fn signed_perimeter_centroid(poly: &Polygon, center: Point) -> Result<Point, GeomError> {
    let area = poly.signed_area();
    let (mut num, mut den) = (Point::ORIGIN, 0.0);
    for i in 0..poly.len() {
        let (p, q) = poly.side(i);
        let len = p.distance(q) * ((p - center).cross(q - center) * area).signum();
        num = num + p.midpoint(q) * len;
        den += len;
    }
    if den.abs() <= 1e-14 * poly.perimeter() {
        return Err(GeomError::ZeroPerimeter);
    }
    Ok(num / den)
}

/// Triangle inscribed in the ellipse with semi-axes `a >= b`, vertices at
/// eccentric angles `t + 2 pi k / 3`. It circumscribes the half-scale ellipse.
pub fn homothetic_triangle(a: f64, b: f64, t: f64) -> Polygon {
    let v = (0..3)
        .map(|k| {
            let s = t + 2.0 * PI * k as f64 / 3.0;
            Point::new(a * s.cos(), b * s.sin())
        })
        .collect();
    Polygon::new(v, 0.0).expect("three distinct points on an ellipse")
}

/// Polar reciprocal of `poly` with respect to `inv`.
///
/// Vertex `i` of the image is the pole of side `i`; the image sides are the
/// polars of the original vertices. Both constructions are computed and must
/// agree.
pub fn polar_image_polygon(poly: &Polygon, inv: &Circle, tol: &ToleranceSet) -> Result<Polygon, GeomError> {
    let n = poly.len();
    let polars = poly.vertices().iter().map(|p| polar_line(*p, inv)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let pole = pole_point(&poly.side_line(i), inv)?;
        let meet = polars[i].intersect(&polars[(i + 1) % n]).map_err(|_| GeomError::DegeneratePolar)?;
        let gap = pole.distance(meet);
        if gap > 1e3 * tol.geometry * pole.norm().max(inv.center.norm()).max(inv.radius) {
            return Err(GeomError::PolarMismatch(gap));
        }
        out.push(pole);
    }
    Polygon::new(out, tol.geometry * inv.radius)
}

/// Conic through the chain-circle centers over `phases` phases.
///
/// Near a degenerate phase of the hyperbola regime a vertex runs off along
/// an asymptote; vertices farther than `OUTLIER_FACTOR` times the median
/// distance from the caustic center are left out so that the normalized
/// frame keeps the vertex region resolved.
pub fn fit_outer_conic(cfg: &PorismConfig, phases: usize, tol: &ToleranceSet) -> Result<ConicFit, PorismError> {
    const OUTLIER_FACTOR: f64 = 20.0;
    let mut pts = Vec::with_capacity(phases * cfg.n());
    let mut center = Point::ORIGIN;
    for j in 0..phases {
        if let Ok(ch) = chain_at_with(cfg, cfg.sample_phase(j, phases), tol) {
            center = ch.caustic.center;
            pts.extend(ch.centers());
        }
    }
    let mut d: Vec<f64> = pts.iter().map(|p| p.distance(center)).collect();
    d.sort_by(f64::total_cmp);
    if let Some(&median) = d.get(d.len() / 2) {
        pts.retain(|p| p.distance(center) <= OUTLIER_FACTOR * median);
    }
    Ok(crate::geom::conic_from_points_with(&pts, tol.rank_separation, tol.classification)?)
}

/// Residual of the tangency of `poly`'s sides to the ellipse with center
/// `center` and axis-aligned semi-axes `(a, b)`, via the support function.
pub fn ellipse_tangency_residual(poly: &Polygon, center: Point, a: f64, b: f64) -> f64 {
    poly.side_lines()
        .iter()
        .map(|l| {
            let n = l.normal();
            (l.signed_distance(center).abs() - (a * a * n.x * n.x + b * b * n.y * n.y).sqrt()).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::closed_form;
    use crate::geom::{point_in_polygon, ConicKind};
    use proptest::prelude::*;

    fn tol() -> ToleranceSet {
        ToleranceSet::default()
    }

    #[test]
    fn centered_inversion_gives_regular_polygons() {
        let c = PorismConfig::new(3, 1.0, 0.0, 1.0).unwrap();
        let p = polygon_at(&c, 0.4).unwrap();
        let s: Vec<f64> = (0..3)
            .map(|i| {
                let (a, b) = p.side(i);
                a.distance(b)
            })
            .collect();
        assert!((s[0] - s[1]).abs() < 1e-14 && (s[1] - s[2]).abs() < 1e-14);
        let h = pedal_polygon_at(&c, 0.4).unwrap();
        let r = h.vertices()[0].norm();
        assert!(h.vertices().iter().all(|v| (v.norm() - r).abs() < 1e-14));
    }

    #[test]
    fn sides_tangent_to_caustic_and_vertices_on_outer_conic() {
        for (n, x0) in [(3, 0.1), (5, 0.2), (4, 0.6), (6, 2.0)] {
            let c = PorismConfig::new(n, 1.0, x0, 1.0).unwrap();
            let k = closed_form::caustic(&c).unwrap();
            let fit = fit_outer_conic(&c, 24, &tol()).unwrap();
            for j in 0..24 {
                let Ok(p) = polygon_at(&c, c.sample_phase(j, 24) + 0.01) else { continue };
                let scale = scale_of(p.vertices());
                for l in p.side_lines() {
                    assert!((l.distance(k.center) - k.radius).abs() < 1e-10 * scale);
                }
                for v in p.vertices() {
                    assert!(fit.normalized.eval(fit.to_normalized(*v)).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn triangle_pedal_is_foot_of_perpendicular() {
        let c = PorismConfig::new(3, 1.0, 0.3, 0.8).unwrap();
        let chain = crate::chain::chain_at(&c, 0.2).unwrap();
        let p = chain.centers();
        let h = pedal_polygon_at(&c, 0.2).unwrap();
        let i = chain.caustic.center;
        for k in 0..3 {
            let (a, b) = (p[k], p[(k + 1) % 3]);
            let d = b - a;
            let foot = a + d * ((i - a).dot(d) / d.norm_sq());
            assert!(foot.distance(h.vertices()[k]) < 1e-12);
        }
    }

    #[test]
    fn ellipse_regime_has_no_branches() {
        let c = PorismConfig::new(3, 1.0, 0.1, 1.0).unwrap();
        assert_eq!(branch_state(&c, 0.3, &tol()).unwrap(), BranchState::NotHyperbola);
    }

    #[test]
    fn split_branch_iff_incenter_outside_pedal() {
        for (n, x0) in [(3, 0.7), (3, 1.2), (4, 1.0), (5, 0.8)] {
            let c = PorismConfig::new(n, 1.0, x0, 1.0).unwrap();
            let mut states = Vec::new();
            for j in 0..720 {
                let Ok(ch) = crate::chain::chain_at(&c, c.sample_phase(j, 720)) else { continue };
                let st = branch_state_of(&ch);
                let h = pedal_from_chain(&ch, &tol()).unwrap();
                let inside = point_in_polygon(ch.caustic.center, &h, 0.0);
                assert_eq!(st == BranchState::SplitBranch, !inside, "n={n} x0={x0} j={j}");
                states.push(st);
            }
            let flips =
                states.windows(2).filter(|w| w[0] != w[1]).count() + usize::from(states.first() != states.last());
            assert_eq!(flips % 2, 0);
            if n == 3 {
                assert!(states.contains(&BranchState::SplitBranch) && states.contains(&BranchState::SingleBranch));
            }
        }
    }

    #[test]
    fn centroids_of_simple_shapes() {
        let sq = Polygon::new(
            vec![Point::new(-0.5, -0.5), Point::new(0.5, -0.5), Point::new(0.5, 0.5), Point::new(-0.5, 0.5)],
            1e-12,
        )
        .unwrap();
        let (a, b, c) = centroids(&sq).unwrap();
        assert!(a.norm() < 1e-15 && b.norm() < 1e-15 && c.norm() < 1e-15);
        let eq = homothetic_triangle(1.0, 1.0, 0.3);
        let (a, b, c) = centroids(&eq).unwrap();
        assert!(a.norm() < 1e-15 && b.norm() < 1e-15 && c.norm() < 1e-15);
    }

    #[test]
    fn centroid_ratio_on_porism_polygon() {
        let c = PorismConfig::new(5, 1.0, 0.25, 1.0).unwrap();
        let ch = crate::chain::chain_at(&c, 0.3).unwrap();
        let i = ch.caustic.center;
        let p = polygon_at(&c, 0.3).unwrap();
        let (_, c1, c2) = centroids(&p).unwrap();
        assert!((c1 - i).cross(c2 - i).abs() < 1e-9 * (c1 - i).norm_sq());
        assert!(((c1 - i).norm() / (c2 - i).norm() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn homothetic_sides_touch_half_ellipse() {
        for j in 0..20 {
            let p = homothetic_triangle(2.0, 1.2, 0.1 * j as f64);
            assert!(ellipse_tangency_residual(&p, Point::ORIGIN, 1.0, 0.6) < 1e-14);
        }
    }

    #[test]
    fn polar_image_of_regular_polygon_about_center() {
        let p = homothetic_triangle(1.0, 1.0, 0.2);
        let img = polar_image_polygon(&p, &Circle::new(Point::ORIGIN, 1.0), &tol()).unwrap();
        // sides of the unit equilateral are at distance 1/2, so poles are at distance 2
        assert!(img.vertices().iter().all(|v| (v.norm() - 2.0).abs() < 1e-13));
    }

    #[test]
    fn outer_conic_kind_tracks_regime() {
        for (x0, kind) in [(0.05, ConicKind::Ellipse), (0.7, ConicKind::Hyperbola), (2.2, ConicKind::Ellipse)] {
            let c = PorismConfig::new(3, 1.0, x0, 1.0).unwrap();
            assert_eq!(fit_outer_conic(&c, 32, &tol()).unwrap().kind(), kind);
        }
        let c = PorismConfig::parabolic(3, 1.0, 1.0, false).unwrap();
        assert_eq!(fit_outer_conic(&c, 32, &tol()).unwrap().kind(), ConicKind::Parabola);
    }

    proptest! {
        #[test]
        fn polar_image_is_involutive(a in 1.0..3.0f64, ratio in 0.3..1.0f64, t in 0.0..std::f64::consts::TAU,
                                    cx in -0.5..0.5f64, cy in -0.3..0.3f64, r in 0.3..2.0f64) {
            let p = homothetic_triangle(a, a * ratio, t);
            let inv = Circle::new(Point::new(cx, cy), r);
            let img = polar_image_polygon(&p, &inv, &tol()).unwrap();
            let back = polar_image_polygon(&img, &inv, &tol()).unwrap();
            // the same polygon, labels shifted by one
            for i in 0..3 {
                prop_assert!(back.vertex(i).distance(p.vertex(i + 1)) < 1e-9);
            }
        }
    }
}

//! Loci of triangle centers over the N = 3 family, and their classification
//! as stationary points, segments, circles or conics.

use crate::centers::{kimberling, CenterId, Triangle};
use crate::chain::{chain_at_with, closed_form, PorismConfig};
use crate::error::{GeomError, PorismError};
use crate::geom::{conic_from_points_with, Circle, Conic, Line, Point, PrincipalForm};
use crate::porism::fit_outer_conic;
use crate::tolerance::ToleranceSet;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocusKind {
    Stationary,
    Segment,
    Circle,
    Conic,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusParams {
    Point(Point),
    Segment(Point, Point),
    Circle(Circle),
    Conic(Conic),
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusResult {
    pub kind: LocusKind,
    pub params: LocusParams,
    /// RMS residual of the winning fit in the normalized frame.
    pub fit_residual: f64,
    /// Valid samples used by the fit.
    pub samples: usize,
    pub gaps: usize,
    /// More than half of the sweep was undefined.
    pub gap_flag: bool,
}

/// Center positions over a sweep; `None` marks a phase where the center
/// (or the chain) is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct LocusSweep {
    pub id: CenterId,
    pub phases: Vec<f64>,
    pub points: Vec<Option<Point>>,
    /// Length scale of the configuration, used by the stationarity test.
    pub scale: f64,
}

impl LocusSweep {
    pub fn valid(&self) -> Vec<Point> {
        self.points.iter().flatten().copied().collect()
    }

    pub fn gaps(&self) -> usize {
        self.points.iter().filter(|p| p.is_none()).count()
    }
}

fn config_scale(cfg: &PorismConfig) -> f64 {
    cfg.r().max(cfg.x0()).max(cfg.lambda())
}

/// The triangle of chain-circle centers at phase `t`.
pub fn triangle_at(cfg: &PorismConfig, t: f64, tol: &ToleranceSet) -> Result<Triangle, PorismError> {
    let ch = chain_at_with(cfg, t, tol)?;
    let c = ch.centers();
    Ok(Triangle::new(c[0], c[1], c[2])?)
}

/// Center `id` at `samples` evenly spaced phases over one period.
pub fn sweep_center(
    cfg: &PorismConfig,
    id: CenterId,
    samples: usize,
    tol: &ToleranceSet,
) -> Result<LocusSweep, PorismError> {
    sweep_with(cfg, id, samples, tol, |tri| kimberling(tri, id))
}

/// Sweep of an arbitrary function of the triangle (used for the centroids).
pub fn sweep_with<F>(
    cfg: &PorismConfig,
    id: CenterId,
    samples: usize,
    tol: &ToleranceSet,
    f: F,
) -> Result<LocusSweep, PorismError>
where
    F: Fn(&Triangle) -> Result<Point, PorismError> + Sync,
{
    if cfg.n() != 3 {
        return Err(PorismError::InvalidConfig(format!("center loci need N = 3, got {}", cfg.n())));
    }
    if samples < MIN_SAMPLES {
        return Err(GeomError::TooFewPoints { needed: MIN_SAMPLES, got: samples }.into());
    }
    let phases: Vec<f64> = (0..samples).map(|j| cfg.sample_phase(j, samples)).collect();
    let points = phases
        .par_iter()
        .map(|&t| triangle_at(cfg, t, tol).and_then(|tri| f(&tri)).ok().filter(|p| p.is_finite()))
        .collect();
    Ok(LocusSweep { id, phases, points, scale: config_scale(cfg) })
}

/// Classifies a sweep, excluding gaps. More than half gaps gives `Other`.
pub fn classify_sweep(sweep: &LocusSweep, tol: &ToleranceSet) -> Result<LocusResult, GeomError> {
    let gaps = sweep.gaps();
    if 2 * gaps > sweep.points.len() {
        return Ok(LocusResult {
            kind: LocusKind::Other,
            params: LocusParams::None,
            fit_residual: f64::NAN,
            samples: sweep.points.len() - gaps,
            gaps,
            gap_flag: true,
        });
    }
    let mut r = classify_locus_scaled(&sweep.valid(), sweep.scale, tol)?;
    r.gaps = gaps;
    Ok(r)
}

/// Classification cascade: stationary, segment, circle, conic, other.
///
/// The stationarity test compares the diameter with the largest coordinate
/// magnitude; [`classify_locus_scaled`] takes an explicit length scale.
pub fn classify_locus(pts: &[Point], tol: &ToleranceSet) -> Result<LocusResult, GeomError> {
    let scale = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
    classify_locus_scaled(pts, scale, tol)
}

pub fn classify_locus_scaled(pts: &[Point], scale: f64, tol: &ToleranceSet) -> Result<LocusResult, GeomError> {
    if pts.len() < MIN_SAMPLES {
        return Err(GeomError::TooFewPoints { needed: MIN_SAMPLES, got: pts.len() });
    }
    let result = |kind, params, fit_residual| LocusResult {
        kind,
        params,
        fit_residual,
        samples: pts.len(),
        gaps: 0,
        gap_flag: false,
    };
    let mean = Point::centroid(pts);
    let diameter = diameter(pts);
    if diameter <= tol.stationary * scale {
        return Ok(result(LocusKind::Stationary, LocusParams::Point(mean), diameter / scale.max(tol.floor)));
    }
    let spread = (pts.iter().map(|p| (*p - mean).norm_sq()).sum::<f64>() / pts.len() as f64).sqrt();
    let q: Vec<Point> = pts.iter().map(|p| (*p - mean) / spread).collect();

    let (dir, line_res) = principal_axis(&q);
    if line_res < tol.segment {
        let proj = |p: &Point| (*p - mean).dot(dir);
        let (lo, hi) = pts.iter().map(proj).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s), b.max(s)));
        return Ok(result(LocusKind::Segment, LocusParams::Segment(mean + dir * lo, mean + dir * hi), line_res));
    }

    if let Some((c, rho, res)) = fit_circle(&q) {
        if res < tol.circle {
            let circle = Circle::new(mean + c * spread, rho * spread);
            return Ok(result(LocusKind::Circle, LocusParams::Circle(circle), res));
        }
    }

    if let Ok(fit) = conic_from_points_with(pts, tol.rank_separation, tol.classification) {
        if fit.residual_rms < tol.conic {
            return Ok(result(LocusKind::Conic, LocusParams::Conic(fit.conic), fit.residual_rms));
        }
    }
    Ok(result(LocusKind::Other, LocusParams::None, f64::NAN))
}

/// Twice the largest distance from the centroid: at most twice the true diameter.
fn diameter(pts: &[Point]) -> f64 {
    let mean = Point::centroid(pts);
    2.0 * pts.iter().map(|p| p.distance(mean)).fold(0.0, f64::max)
}

/// Unit direction of largest spread and the RMS perpendicular distance.
fn principal_axis(q: &[Point]) -> (Point, f64) {
    let n = q.len() as f64;
    let (sxx, sxy, syy) = q.iter().fold((0.0, 0.0, 0.0), |(a, b, c), p| (a + p.x * p.x, b + p.x * p.y, c + p.y * p.y));
    let (sxx, sxy, syy) = (sxx / n, sxy / n, syy / n);
    let phi = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let dir = Point::polar(1.0, phi);
    let normal = dir.perp();
    let res = (q.iter().map(|p| p.dot(normal).powi(2)).sum::<f64>() / n).sqrt();
    (dir, res)
}

/// Algebraic (Kasa) circle fit refined by Gauss-Newton on the geometric
/// distance. Returns center, radius and RMS radial residual.
pub fn fit_circle(q: &[Point]) -> Option<(Point, f64, f64)> {
    let n = q.len();
    let a = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => q[i].x,
        1 => q[i].y,
        _ => 1.0,
    });
    let b = DVector::from_fn(n, |i, _| -(q[i].norm_sq()));
    let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
    let mut c = Point::new(-0.5 * sol[0], -0.5 * sol[1]);
    let r2 = c.norm_sq() - sol[2];
    if !(r2 > 0.0) {
        return None;
    }
    let mut rho = r2.sqrt();
    for _ in 0..20 {
        let jac = DMatrix::from_fn(n, 3, |i, j| {
            let d = q[i] - c;
            let dn = d.norm().max(1e-300);
            match j {
                0 => -d.x / dn,
                1 => -d.y / dn,
                _ => -1.0,
            }
        });
        let res = DVector::from_fn(n, |i, _| (q[i] - c).norm() - rho);
        let step = jac.svd(true, true).solve(&(-res), 1e-14).ok()?;
        c = c + Point::new(step[0], step[1]);
        rho += step[2];
        if step.norm() < 1e-15 * (1.0 + rho) {
            break;
        }
    }
    let res = (q.iter().map(|p| ((*p - c).norm() - rho).powi(2)).sum::<f64>() / n as f64).sqrt();
    (rho.is_finite() && rho > 0.0).then_some((c, rho, res))
}

/// Largest normalized residual of `pts` on an axis-aligned implicit conic.
pub fn polynomial_residual(pts: &[Point], conic: &closed_form::AxisConic) -> f64 {
    pts.iter().map(|p| conic.normalized_eval(*p).abs()).fold(0.0, f64::max)
}

/// The circle `(x - cx)^2 + y^2 = rho^2` as an axis-aligned conic.
pub fn circle_as_axis_conic(c: &Circle) -> closed_form::AxisConic {
    let (cx, cy) = (c.center.x, c.center.y);
    debug_assert!(cy == 0.0);
    closed_form::AxisConic { a: 1.0, c: 1.0, d: -2.0 * cx, f: cx * cx - c.radius * c.radius }
}

/// Parabola `4 c y = x^2` with an incircle centered at `(0, y0)` admitting
/// Poncelet triangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolaFamily {
    pub c: f64,
    pub y0: f64,
    pub r: f64,
}

impl ParabolaFamily {
    /// Closure radius `4 y0 c / sqrt(16 c^2 + x0^2)`, with
    /// `x0^2 = 4 (-2c^2 + y0 c + 2 sqrt(c^3 (c + y0)))`.
    pub fn new(c: f64, y0: f64) -> Result<Self, PorismError> {
        let bad = |why: &str| Err(PorismError::InvalidConfiguration(format!("parabola c = {c}, y0 = {y0}: {why}")));
        if !(c > 0.0) || !c.is_finite() || !y0.is_finite() {
            return bad("need c > 0");
        }
        if !(c + y0 > 0.0) {
            return bad("need y0 > -c");
        }
        let x02 = 4.0 * (-2.0 * c * c + y0 * c + 2.0 * (c.powi(3) * (c + y0)).sqrt());
        if !(x02 > 0.0) {
            return bad("no closing circle");
        }
        let r = 4.0 * y0 * c / (16.0 * c * c + x02).sqrt();
        if !(r > 0.0) {
            return bad("closing radius is not positive");
        }
        Ok(Self { c, y0, r })
    }

    /// Unit parabola `y = x^2` with incircle radius `r`; the center is at `r^2 + r`.
    pub fn unit(r: f64) -> Result<Self, PorismError> {
        Self::new(0.25, r * r + r)
    }

    pub fn point(&self, u: f64) -> Point {
        Point::new(u, u * u / (4.0 * self.c))
    }

    pub fn incircle(&self) -> Circle {
        Circle::new(Point::new(0.0, self.y0), self.r)
    }

    /// Triangle with a vertex at abscissa `u`, built from the two tangents
    /// to the incircle. The third side's tangency defect is returned too.
    pub fn triangle(&self, u: f64) -> Result<(Triangle, f64), PorismError> {
        let a = self.point(u);
        let o = Point::new(0.0, self.y0);
        let d = a.distance(o);
        if d <= self.r * (1.0 + 1e-12) {
            return Err(PorismError::InvalidConfiguration(format!("vertex abscissa {u} is inside the incircle")));
        }
        let beta = (self.r / d).asin();
        let to_o = (o - a) / d;
        let second = |ang: f64| -> Result<Point, PorismError> {
            let (s, co) = ang.sin_cos();
            let dir = Point::new(to_o.x * co - to_o.y * s, to_o.x * s + to_o.y * co);
            if dir.x.abs() < 1e-14 {
                return Err(PorismError::InvalidConfiguration("tangent parallel to the axis".into()));
            }
            let t = (4.0 * self.c * dir.y - 2.0 * a.x * dir.x) / (dir.x * dir.x);
            Ok(a + dir * t)
        };
        let (b, c) = (second(beta)?, second(-beta)?);
        let defect = (Line::through(b, c).distance(o) - self.r).abs();
        Ok((Triangle::new(a, b, c)?, defect))
    }
}

/// Line `y = (-6c^2 + y0 c + 2 sqrt(c^3 (c + y0))) / c` traced by the
/// orthocenter over the family of [`ParabolaFamily::new`].
pub fn x4_parabola_line(c: f64, y0: f64) -> Result<Line, PorismError> {
    ParabolaFamily::new(c, y0)?;
    let y = (-6.0 * c * c + y0 * c + 2.0 * (c.powi(3) * (c + y0)).sqrt()) / c;
    Ok(Line::new(0.0, 1.0, -y))
}

/// Orthocenters of `samples` triangles of the family, with vertex abscissas
/// spread over `(-span, span)`, together with the worst closure defect.
pub fn parabola_orthocenters(fam: &ParabolaFamily, span: f64, samples: usize) -> (Vec<Point>, f64) {
    let x4 = CenterId::new(4).expect("X4 is supported");
    let mut worst = 0.0f64;
    let pts = (0..samples)
        .filter_map(|j| {
            let u = -span + 2.0 * span * (j as f64 + 0.5) / samples as f64;
            let (tri, defect) = fam.triangle(u).ok()?;
            worst = worst.max(defect);
            kimberling(&tri, x4).ok()
        })
        .collect();
    (pts, worst)
}

/// Orthocenters of the chain triangles in the frame of the fitted outer
/// parabola: `y` along the axis towards the focus, measured from the vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolaFrameX4 {
    pub focal_length: f64,
    pub axis: Point,
    pub ordinates: Vec<f64>,
}

pub fn x4_in_parabola_frame(
    cfg: &PorismConfig,
    samples: usize,
    tol: &ToleranceSet,
) -> Result<ParabolaFrameX4, PorismError> {
    let fit = fit_outer_conic(cfg, samples, tol)?;
    let PrincipalForm::Parabola { vertex, axis, focal_length } = fit.conic.principal_form()? else {
        return Err(PorismError::InvalidConfiguration(format!("outer conic is {:?}, not a parabola", fit.kind())));
    };
    let sweep = sweep_center(cfg, CenterId::new(4)?, samples, tol)?;
    let ordinates = sweep.valid().iter().map(|p| (*p - vertex).dot(axis)).collect();
    Ok(ParabolaFrameX4 { focal_length, axis, ordinates })
}

/// A local minimum of the distance between an ellipse and a circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveContact {
    /// Eccentric-anomaly parameter on the ellipse.
    pub parameter: f64,
    pub point: Point,
    /// `| |E(s) - center| - radius |` at the minimum.
    pub gap: f64,
}

/// Local minima of the ellipse-to-circle distance, smallest gap first.
pub fn ellipse_circle_contacts(ellipse: &Conic, circle: &Circle) -> Result<Vec<CurveContact>, GeomError> {
    let PrincipalForm::Central { center, axis, a, b, hyperbola: false } = ellipse.principal_form()? else {
        return Err(GeomError::DegenerateConic);
    };
    let at = |s: f64| center + axis * (a * s.cos()) + axis.perp() * (b * s.sin());
    let gap = |s: f64| (at(s).distance(circle.center) - circle.radius).abs();
    const GRID: usize = 3600;
    let h = std::f64::consts::TAU / GRID as f64;
    let g: Vec<f64> = (0..GRID).map(|i| gap(i as f64 * h)).collect();
    let mut out = Vec::new();
    for i in 0..GRID {
        let (prev, next) = (g[(i + GRID - 1) % GRID], g[(i + 1) % GRID]);
        if g[i] <= prev && g[i] < next {
            let (mut lo, mut hi) = ((i as f64 - 1.0) * h, (i as f64 + 1.0) * h);
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let m1 = hi - phi * (hi - lo);
                let m2 = lo + phi * (hi - lo);
                if gap(m1) < gap(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let s = (0.5 * (lo + hi)).rem_euclid(std::f64::consts::TAU);
            out.push(CurveContact { parameter: s, point: at(s), gap: gap(s) });
        }
    }
    out.sort_by(|p, q| p.gap.total_cmp(&q.gap));
    Ok(out)
}

/// One row of the orthocenter/outer-conic coincidence scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct X4ScanRow {
    pub x0: f64,
    pub aspect_ratio: f64,
    /// Coefficient distance between the orthocenter locus and the outer conic.
    pub distance: f64,
}

/// Scan over `x0` comparing the orthocenter locus with the outer conic.
/// Only reports; a small distance marks a coincidence candidate.
pub fn x4_coincidence_scan(r: f64, lambda: f64, x0s: &[f64], tol: &ToleranceSet) -> Vec<X4ScanRow> {
    x0s.par_iter()
        .filter_map(|&x0| {
            let cfg = PorismConfig::new(3, r, x0, lambda).ok()?;
            let b = closed_form::brocard_inellipse(&cfg).ok()?;
            let x4 = Conic::new(closed_form::x4_conic(&cfg).ok()?.coeffs());
            let outer = fit_outer_conic(&cfg, 90, tol).ok()?;
            Some(X4ScanRow { x0, aspect_ratio: b.aspect_ratio(), distance: x4.coefficient_distance(&outer.conic) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centers::intouch_triangle;
    use crate::centers::is_acute;
    use crate::chain::closed_form::X6Reading;
    use crate::geom::ConicKind;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn tol() -> ToleranceSet {
        ToleranceSet::default()
    }

    fn id(k: u32) -> CenterId {
        CenterId::new(k).unwrap()
    }

    #[test]
    fn cascade_trivial_inputs() {
        let same = vec![Point::new(0.3, -0.2); 360];
        assert_eq!(classify_locus(&same, &tol()).unwrap().kind, LocusKind::Stationary);

        let line: Vec<Point> = (0..360).map(|j| Point::new(-1.0 + 2.0 * j as f64 / 359.0, 1.0)).collect();
        let r = classify_locus(&line, &tol()).unwrap();
        assert_eq!(r.kind, LocusKind::Segment);
        let LocusParams::Segment(a, b) = r.params else { panic!() };
        let (a, b) = if a.x < b.x { (a, b) } else { (b, a) };
        assert!(a.distance(Point::new(-1.0, 1.0)) < 1e-12 && b.distance(Point::new(1.0, 1.0)) < 1e-12);

        let circ: Vec<Point> = (0..100).map(|j| Point::new(2.0, 1.0) + Point::polar(0.5, j as f64 * 0.05)).collect();
        let r = classify_locus(&circ, &tol()).unwrap();
        assert_eq!(r.kind, LocusKind::Circle);
        let LocusParams::Circle(c) = r.params else { panic!() };
        assert!(c.center.distance(Point::new(2.0, 1.0)) < 1e-12 && (c.radius - 0.5).abs() < 1e-12);

        let ell: Vec<Point> = (0..100)
            .map(|j| {
                let t = j as f64 * 0.07;
                Point::new(3.0 * t.cos(), t.sin())
            })
            .collect();
        let r = classify_locus(&ell, &tol()).unwrap();
        assert_eq!(r.kind, LocusKind::Conic);

        let cubic: Vec<Point> = (0..100)
            .map(|j| {
                let x = -1.0 + j as f64 * 0.02;
                Point::new(x, x * x * x - 0.5 * x)
            })
            .collect();
        assert_eq!(classify_locus(&cubic, &tol()).unwrap().kind, LocusKind::Other);

        assert!(matches!(classify_locus(&same[..5], &tol()), Err(GeomError::TooFewPoints { .. })));
    }

    #[test]
    fn gaps_over_half_give_other() {
        let cfg = PorismConfig::new(3, 1.0, 0.1, 1.0).unwrap();
        let mut s = sweep_center(&cfg, id(2), 32, &tol()).unwrap();
        for p in s.points.iter_mut().take(17) {
            *p = None;
        }
        let r = classify_sweep(&s, &tol()).unwrap();
        assert_eq!(r.kind, LocusKind::Other);
        assert!(r.gap_flag);
        assert_eq!(r.gaps, 17);
    }

    #[test]
    fn centered_inversion_is_stationary() {
        let cfg = PorismConfig::new(3, 1.0, 0.0, 1.3).unwrap();
        for k in [1, 2, 3, 4, 6, 20] {
            let s = sweep_center(&cfg, id(k), 64, &tol()).unwrap();
            assert_eq!(classify_sweep(&s, &tol()).unwrap().kind, LocusKind::Stationary, "X{k}");
        }
    }

    #[test]
    fn sweep_requires_triangles() {
        let cfg = PorismConfig::new(4, 1.0, 0.1, 1.0).unwrap();
        assert!(sweep_center(&cfg, id(2), 64, &tol()).is_err());
        let cfg = PorismConfig::new(3, 1.0, 0.1, 1.0).unwrap();
        assert!(sweep_center(&cfg, id(2), 8, &tol()).is_err());
    }

    #[test]
    fn printed_locus_polynomials_hold() {
        for x0 in [0.05, 0.1, 0.2] {
            let cfg = PorismConfig::new(3, 1.0, x0, 1.0).unwrap();
            let pts = |k| sweep_center(&cfg, id(k), 360, &tol()).unwrap().valid();
            assert!(polynomial_residual(&pts(2), &closed_form::x2_conic(&cfg).unwrap()) < 1e-6);
            assert!(polynomial_residual(&pts(3), &closed_form::x3_conic(&cfg).unwrap()) < 1e-6);
            assert!(polynomial_residual(&pts(4), &closed_form::x4_conic(&cfg).unwrap()) < 1e-6);
            let x6 = pts(6);
            let minus = polynomial_residual(&x6, &closed_form::x6_conic_reading(&cfg, X6Reading::Minus).unwrap());
            let plus = polynomial_residual(&x6, &closed_form::x6_conic_reading(&cfg, X6Reading::Plus).unwrap());
            assert!(minus < 1e-6, "x0 = {x0}: minus {minus:e}, plus {plus:e}");
            assert!(plus > 1e3 * minus);
        }
    }

    #[test]
    fn isodynamic_circle_matches_printed_circle() {
        let cfg = PorismConfig::new(3, 1.0, 0.1, 1.0).unwrap();
        let s = sweep_center(&cfg, id(15), 360, &tol()).unwrap();
        let circle = closed_form::x15_circle(&cfg).unwrap();
        let res = polynomial_residual(&s.valid(), &circle_as_axis_conic(&circle));
        assert!(res < 1e-6, "{res:e}");
    }

    #[test]
    fn de_longchamps_segment_matches_printed_endpoints() {
        let cfg = PorismConfig::new(3, 1.0, 0.1, 1.0).unwrap();
        let s = sweep_center(&cfg, id(20), 3600, &tol()).unwrap();
        let r = classify_sweep(&s, &tol()).unwrap();
        assert_eq!(r.kind, LocusKind::Segment);
        let LocusParams::Segment(a, b) = r.params else { panic!() };
        let seg = closed_form::x20_segment(&cfg).unwrap();
        let (lo, hi) = seg.endpoints();
        assert!(a.y.abs() < 1e-9 && b.y.abs() < 1e-9);
        let (fa, fb) = (a.x.min(b.x), a.x.max(b.x));
        // sampled extremes approach the endpoints quadratically in the step
        assert!((fa - lo).abs() < 1e-5 && (fb - hi).abs() < 1e-5, "{fa} {fb} vs {lo} {hi}");
        assert!(((fb - fa) - seg.length).abs() < 1e-5);
    }

    #[test]
    fn incenter_and_gergonne_stationary_while_intouch_acute() {
        let cfg = PorismConfig::new(3, 1.0, 0.1, 1.0).unwrap();
        let acute = (0..360).all(|j| {
            let tri = triangle_at(&cfg, cfg.sample_phase(j, 360), &tol()).unwrap();
            is_acute(&intouch_triangle(&tri))
        });
        assert!(acute);
        for k in [1, 7] {
            let s = sweep_center(&cfg, id(k), 360, &tol()).unwrap();
            assert_eq!(classify_sweep(&s, &tol()).unwrap().kind, LocusKind::Stationary, "X{k}");
        }
    }

    #[test]
    fn unit_parabola_orthocenter_ordinate() {
        for r in [0.05, 0.2, 0.5, 1.0, 3.0] {
            let fam = ParabolaFamily::unit(r).unwrap();
            assert!((fam.r - r).abs() < 1e-12);
            let (pts, defect) = parabola_orthocenters(&fam, 3.0 + 2.0 * r, 200);
            assert!(pts.len() > 150);
            assert!(defect < 1e-9, "closure defect {defect:e}");
            for p in pts {
                assert!((p.y - (r * r + 2.0 * r - 1.0)).abs() < 1e-9, "r = {r}: {}", p.y);
            }
            let line = x4_parabola_line(0.25, r * r + r).unwrap();
            assert!((line.signed_distance(Point::new(0.0, r * r + 2.0 * r - 1.0))).abs() < 1e-12);
        }
        // r -> 0: ordinate -> -1
        let l = x4_parabola_line(0.25, 1e-12 + 1e-24).unwrap();
        assert!((l.signed_distance(Point::new(0.0, -1.0))).abs() < 1e-11);
    }

    #[test]
    fn general_parabola_line_matches_samples() {
        for (c, y0) in [(1.0, 2.0), (0.3, 0.7), (2.0, 0.5)] {
            let fam = ParabolaFamily::new(c, y0).unwrap();
            let line = x4_parabola_line(c, y0).unwrap();
            let (pts, defect) = parabola_orthocenters(&fam, 6.0 * c + 4.0 * fam.r, 100);
            assert!(defect < 1e-9 * c.max(1.0));
            assert!(pts.len() > 50);
            for p in pts {
                assert!(line.distance(p) < 1e-9 * c.max(1.0));
            }
        }
        assert!(matches!(x4_parabola_line(-1.0, 1.0), Err(PorismError::InvalidConfiguration(_))));
        assert!(matches!(x4_parabola_line(1.0, -2.0), Err(PorismError::InvalidConfiguration(_))));
    }

    #[test]
    fn steiner_soddy_parabola_orthocenter_line() {
        for outer in [false, true] {
            let cfg = PorismConfig::parabolic(3, 1.0, 0.7, outer).unwrap();
            let f = x4_in_parabola_frame(&cfg, 360, &tol()).unwrap();
            let c = f.focal_length;
            for y in &f.ordinates {
                assert!((y + 1.75 * c).abs() < 1e-6 * c, "outer = {outer}: {y} vs {}", -1.75 * c);
            }
        }
    }

    #[test]
    fn locus_table_reference_config() {
        let cfg = PorismConfig::new(3, 1.0, 0.1, 1.0).unwrap();
        let kind = |k| classify_sweep(&sweep_center(&cfg, id(k), 360, &tol()).unwrap(), &tol()).unwrap();
        for k in [2, 3, 4, 5, 6, 8, 9, 10] {
            assert_eq!(kind(k).kind, LocusKind::Conic, "X{k}");
        }
        for k in [13, 14, 15, 16, 80] {
            assert_eq!(kind(k).kind, LocusKind::Circle, "X{k}");
        }
        for k in [20, 77, 170] {
            let r = kind(k);
            assert_eq!(r.kind, LocusKind::Segment, "X{k}: {r:?}");
        }
        for k in [175, 176] {
            assert_eq!(kind(k).kind, LocusKind::Stationary, "X{k}");
        }
        let r = kind(105);
        assert_eq!(r.kind, LocusKind::Circle);
        let LocusParams::Circle(c) = r.params else { panic!() };
        assert!(c.center.y.abs() < 1e-8);
        let outer = fit_outer_conic(&cfg, 120, &tol()).unwrap();
        assert_eq!(outer.kind(), ConicKind::Ellipse);
        let contacts = ellipse_circle_contacts(&outer.conic, &c).unwrap();
        assert!(contacts.len() >= 2);
        assert!(contacts[0].gap < 1e-6 && contacts[1].gap < 1e-6, "{contacts:?}");
        assert!((contacts[0].point.y + contacts[1].point.y).abs() < 1e-6);
        assert!(contacts[0].point.y.abs() > 1e-3);
    }

    #[test]
    fn coincidence_scan_reports_rows() {
        let rows = x4_coincidence_scan(1.0, 1.0, &[0.1, 0.2, 0.3], &tol());
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.distance.is_finite() && r.aspect_ratio.is_finite()));
        let _ = PI;
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn circle_fit_recovers_circles(cx in -5.0..5.0f64, cy in -5.0..5.0f64, r in 0.1..3.0f64, a0 in 0.0..6.0f64) {
            let pts: Vec<Point> = (0..40).map(|j| Point::new(cx, cy) + Point::polar(r, a0 + 0.1 * j as f64)).collect();
            let res = classify_locus(&pts, &tol()).unwrap();
            prop_assert_eq!(res.kind, LocusKind::Circle);
            let LocusParams::Circle(c) = res.params else { unreachable!() };
            prop_assert!(c.center.distance(Point::new(cx, cy)) < 1e-9 * (1.0 + r));
            prop_assert!((c.radius - r).abs() < 1e-9 * (1.0 + r));
        }

        #[test]
        fn x4_ordinate_independent_of_vertex(r in 0.05..2.0f64, u in -4.0..4.0f64) {
            let fam = ParabolaFamily::unit(r).unwrap();
            if let Ok((tri, defect)) = fam.triangle(u) {
                prop_assert!(defect < 1e-8);
                let h = kimberling(&tri, id(4)).unwrap();
                prop_assert!((h.y - (r * r + 2.0 * r - 1.0)).abs() < 1e-8 * (1.0 + u * u));
            }
        }
    }
}

use super::{Line, Point};
use crate::error::GeomError;
use nalgebra::{DMatrix, Matrix3};
use serde::{Deserialize, Serialize};

/// Default threshold for discriminant and circularity tests on unit-norm coefficients.
pub const CLASSIFY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConicKind {
    Ellipse,
    Parabola,
    Hyperbola,
    Circle,
    DegeneratePair,
    Empty,
}

/// `A x^2 + B xy + C y^2 + D x + E y + F = 0`, coefficients of unit Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conic {
    pub coeffs: [f64; 6],
    pub kind: ConicKind,
}

/// Center/axes description of a non-degenerate conic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrincipalForm {
    /// Ellipse or hyperbola. `axis` is the unit direction of the major
    /// (ellipse) or transverse (hyperbola) axis; `a` is the semi-axis along
    /// it and `b` the other one.
    Central { center: Point, axis: Point, a: f64, b: f64, hyperbola: bool },
    /// `axis` points from the vertex towards the focus.
    Parabola { vertex: Point, axis: Point, focal_length: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FocalData {
    Foci(Point, Point),
    FocusDirectrix { focus: Point, directrix: Line },
}

fn eigen_sym2(a: f64, b_half: f64, c: f64) -> ((f64, Point), (f64, Point)) {
    let m = 0.5 * (a + c);
    let d = (0.5 * (a - c)).hypot(b_half);
    let phi = 0.5 * (2.0 * b_half).atan2(a - c);
    let e1 = Point::polar(1.0, phi);
    ((m + d, e1), (m - d, e1.perp()))
}

impl Conic {
    /// Normalizes the coefficient vector and classifies with the default tolerance.
    pub fn new(coeffs: [f64; 6]) -> Self {
        let coeffs = canonical(coeffs);
        let kind = classify_coeffs(&coeffs, CLASSIFY_TOL).unwrap_or(ConicKind::DegeneratePair);
        Self { coeffs, kind }
    }

    pub fn with_kind(coeffs: [f64; 6], kind: ConicKind) -> Self {
        Self { coeffs: canonical(coeffs), kind }
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Self::new(matrix_to_coeffs(m))
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        coeffs_to_matrix(&self.coeffs)
    }

    /// Ellipse with the given center, major-axis angle and semi-axes.
    pub fn ellipse(center: Point, angle: f64, a: f64, b: f64) -> Self {
        let kind = if a == b { ConicKind::Circle } else { ConicKind::Ellipse };
        Self { kind, ..Self::central(center, angle, 1.0 / (a * a), 1.0 / (b * b)) }
    }

    /// Hyperbola with transverse semi-axis `a` along `angle`.
    pub fn hyperbola(center: Point, angle: f64, a: f64, b: f64) -> Self {
        Self { kind: ConicKind::Hyperbola, ..Self::central(center, angle, 1.0 / (a * a), -1.0 / (b * b)) }
    }

    /// Parabola `(u)^2 = 4 f v` in the frame with origin `vertex` and `v` along `angle`.
    pub fn parabola(vertex: Point, angle: f64, focal_length: f64) -> Self {
        let v = Point::polar(1.0, angle);
        let u = v.perp();
        // (u.(x-p))^2 - 4 f v.(x-p) = 0
        let local = Matrix3::new(1.0, 0.0, 0.0, 0.0, 0.0, -2.0 * focal_length, 0.0, -2.0 * focal_length, 0.0);
        Self::with_kind(matrix_to_coeffs(&frame_pullback(&local, vertex, u, v)), ConicKind::Parabola)
    }

    fn central(center: Point, angle: f64, ka: f64, kb: f64) -> Self {
        let u = Point::polar(1.0, angle);
        let local = Matrix3::new(ka, 0.0, 0.0, 0.0, kb, 0.0, 0.0, 0.0, -1.0);
        Self::with_kind(matrix_to_coeffs(&frame_pullback(&local, center, u, u.perp())), ConicKind::Ellipse)
    }

    pub fn eval(&self, p: Point) -> f64 {
        let [a, b, c, d, e, f] = self.coeffs;
        a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + f
    }

    pub fn discriminant(&self) -> f64 {
        let [a, b, c, ..] = self.coeffs;
        b * b - 4.0 * a * c
    }

    pub fn classify(&self, tol: f64) -> Result<ConicKind, GeomError> {
        classify_coeffs(&self.coeffs, tol)
    }

    /// Principal-axes form from the eigendecomposition of the quadratic part.
    pub fn principal_form(&self) -> Result<PrincipalForm, GeomError> {
        let [a, b, c, d, e, f] = self.coeffs;
        let ((l1, e1), (l2, e2)) = eigen_sym2(a, 0.5 * b, c);
        match self.kind {
            ConicKind::DegeneratePair | ConicKind::Empty => Err(GeomError::DegenerateConic),
            ConicKind::Parabola => {
                let (ln, en, ea) = if l1.abs() >= l2.abs() { (l1, e1, e2) } else { (l2, e2, e1) };
                let lin = Point::new(d, e);
                let (dn, da) = (lin.dot(en), lin.dot(ea));
                if ln.abs() < 1e-300 || da.abs() < 1e-300 {
                    return Err(GeomError::DegenerateConic);
                }
                let u0 = -dn / (2.0 * ln);
                let v0 = (dn * dn / (4.0 * ln) - f) / da;
                let p = -da / (4.0 * ln);
                let (axis, fl) = if p >= 0.0 { (ea, p) } else { (-ea, -p) };
                Ok(PrincipalForm::Parabola { vertex: en * u0 + ea * v0, axis, focal_length: fl })
            }
            ConicKind::Ellipse | ConicKind::Circle | ConicKind::Hyperbola => {
                let det = a * c - 0.25 * b * b;
                if det.abs() < 1e-300 {
                    return Err(GeomError::DegenerateConic);
                }
                let center = Point::new((b * e - 2.0 * c * d) / (4.0 * det), (b * d - 2.0 * a * e) / (4.0 * det));
                let fc = f + 0.5 * (d * center.x + e * center.y);
                let (s1, s2) = (-fc / l1, -fc / l2);
                if self.kind == ConicKind::Hyperbola {
                    let (axis, a2, b2) = if s1 > 0.0 { (e1, s1, -s2) } else { (e2, s2, -s1) };
                    Ok(PrincipalForm::Central { center, axis, a: a2.sqrt(), b: b2.sqrt(), hyperbola: true })
                } else {
                    if s1 <= 0.0 || s2 <= 0.0 {
                        return Err(GeomError::DegenerateConic);
                    }
                    let (axis, a2, b2) = if s1 >= s2 { (e1, s1, s2) } else { (e2, s2, s1) };
                    Ok(PrincipalForm::Central { center, axis, a: a2.sqrt(), b: b2.sqrt(), hyperbola: false })
                }
            }
        }
    }

    /// Two foci for central conics; focus and directrix for a parabola.
    pub fn foci(&self) -> Result<FocalData, GeomError> {
        Ok(match self.principal_form()? {
            PrincipalForm::Central { center, axis, a, b, hyperbola } => {
                let c = if hyperbola { a.hypot(b) } else { (a * a - b * b).max(0.0).sqrt() };
                FocalData::Foci(center + axis * c, center - axis * c)
            }
            PrincipalForm::Parabola { vertex, axis, focal_length } => FocalData::FocusDirectrix {
                focus: vertex + axis * focal_length,
                directrix: Line::with_normal(axis, vertex - axis * focal_length),
            },
        })
    }

    /// Same curve up to coefficient sign.
    pub fn coefficient_distance(&self, other: &Conic) -> f64 {
        let d =
            |s: f64| self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| (a - s * b).powi(2)).sum::<f64>().sqrt();
        d(1.0).min(d(-1.0))
    }
}

fn canonical(mut c: [f64; 6]) -> [f64; 6] {
    let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        c.iter_mut().for_each(|v| *v /= n);
    }
    let lead = if (c[0] + c[2]).abs() > 1e-12 {
        c[0] + c[2]
    } else {
        c.iter().copied().find(|v| v.abs() > 1e-12).unwrap_or(1.0)
    };
    if lead < 0.0 {
        c.iter_mut().for_each(|v| *v = -*v);
    }
    c
}

fn coeffs_to_matrix(c: &[f64; 6]) -> Matrix3<f64> {
    let [a, b, cc, d, e, f] = *c;
    Matrix3::new(a, 0.5 * b, 0.5 * d, 0.5 * b, cc, 0.5 * e, 0.5 * d, 0.5 * e, f)
}

fn matrix_to_coeffs(m: &Matrix3<f64>) -> [f64; 6] {
    [m[(0, 0)], m[(0, 1)] + m[(1, 0)], m[(1, 1)], m[(0, 2)] + m[(2, 0)], m[(1, 2)] + m[(2, 1)], m[(2, 2)]]
}

/// Expresses a conic given in a local orthonormal frame `(origin, u, v)` in world coordinates.
fn frame_pullback(local: &Matrix3<f64>, origin: Point, u: Point, v: Point) -> Matrix3<f64> {
    let t = Matrix3::new(u.x, u.y, -u.dot(origin), v.x, v.y, -v.dot(origin), 0.0, 0.0, 1.0);
    t.transpose() * local * t
}

fn classify_coeffs(c: &[f64; 6], tol: f64) -> Result<ConicKind, GeomError> {
    let m = coeffs_to_matrix(c);
    let det = m.determinant();
    if det.abs() < tol {
        return Err(GeomError::DegenerateConic);
    }
    let [a, b, cc, ..] = *c;
    let disc = b * b - 4.0 * a * cc;
    if disc.abs() < tol {
        return Ok(ConicKind::Parabola);
    }
    if disc > 0.0 {
        return Ok(ConicKind::Hyperbola);
    }
    if (a + cc) * det > 0.0 {
        return Ok(ConicKind::Empty);
    }
    if (a - cc).abs() < tol && b.abs() < tol {
        Ok(ConicKind::Circle)
    } else {
        Ok(ConicKind::Ellipse)
    }
}

/// Result of a least-squares conic fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicFit {
    /// Fitted conic in the input frame.
    pub conic: Conic,
    /// The same conic in the normalized frame (zero mean, unit RMS radius).
    pub normalized: Conic,
    pub shift: Point,
    pub scale: f64,
    /// RMS algebraic residual in the normalized frame.
    pub residual_rms: f64,
    /// Second-smallest over largest singular value of the design matrix.
    pub separation: f64,
}

impl ConicFit {
    pub fn kind(&self) -> ConicKind {
        self.normalized.kind
    }

    pub fn to_normalized(&self, p: Point) -> Point {
        (p - self.shift) / self.scale
    }
}

fn normalization(points: &[Point]) -> Result<(Point, f64), GeomError> {
    let mean = Point::centroid(points);
    let scale = (points.iter().map(|p| (*p - mean).norm_sq()).sum::<f64>() / points.len() as f64).sqrt();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(GeomError::RankDeficient(0.0));
    }
    Ok((mean, scale))
}

/// Null vector of the monomial design matrix, plus RMS residual and separation.
fn null_vector(rows: &[[f64; 6]]) -> (Vector6, f64, f64) {
    let n = rows.len().max(6);
    let mut m = DMatrix::<f64>::zeros(n, 6);
    for (i, r) in rows.iter().enumerate() {
        for j in 0..6 {
            m[(i, j)] = r[j];
        }
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let smallest = order[0];
    let sv = &svd.singular_values;
    let largest = sv[order[5]].max(1e-300);
    let v: Vector6 = std::array::from_fn(|j| vt[(smallest, j)]);
    let residual = sv[smallest] / (rows.len() as f64).sqrt();
    (v, residual, sv[order[1]] / largest)
}

type Vector6 = [f64; 6];

fn finish_fit(
    normalized_coeffs: Vector6,
    shift: Point,
    scale: f64,
    residual_rms: f64,
    separation: f64,
    tol: f64,
) -> ConicFit {
    let normalized = {
        let c = canonical(normalized_coeffs);
        let kind = classify_coeffs(&c, tol).unwrap_or(ConicKind::DegeneratePair);
        Conic { coeffs: c, kind }
    };
    let t = Matrix3::new(1.0 / scale, 0.0, -shift.x / scale, 0.0, 1.0 / scale, -shift.y / scale, 0.0, 0.0, 1.0);
    let world = t.transpose() * normalized.matrix() * t;
    let conic = Conic::with_kind(matrix_to_coeffs(&world), normalized.kind);
    ConicFit { conic, normalized, shift, scale, residual_rms, separation }
}

/// Least-squares conic through at least five points.
///
/// Points are shifted to zero mean and scaled to unit RMS radius before the
/// fit; the conic is the right singular vector of the monomial design matrix
/// `(x^2, xy, y^2, x, y, 1)` for the smallest singular value.
pub fn conic_from_points(points: &[Point]) -> Result<ConicFit, GeomError> {
    conic_from_points_with(points, 1e-9, CLASSIFY_TOL)
}

pub fn conic_from_points_with(points: &[Point], separation_tol: f64, classify_tol: f64) -> Result<ConicFit, GeomError> {
    if points.len() < 5 {
        return Err(GeomError::TooFewPoints { needed: 5, got: points.len() });
    }
    let (shift, scale) = normalization(points)?;
    let rows: Vec<[f64; 6]> = points
        .iter()
        .map(|p| {
            let q = (*p - shift) / scale;
            [q.x * q.x, q.x * q.y, q.y * q.y, q.x, q.y, 1.0]
        })
        .collect();
    let (v, residual, separation) = null_vector(&rows);
    if separation < separation_tol {
        return Err(GeomError::RankDeficient(separation));
    }
    Ok(finish_fit(v, shift, scale, residual, separation, classify_tol))
}

/// Conic tangent to (at least five) given lines, via a fit of the dual conic.
///
/// The normalized frame is built from the feet of the perpendiculars dropped
/// from the origin onto the lines.
pub fn conic_from_tangent_lines(lines: &[Line]) -> Result<ConicFit, GeomError> {
    if lines.len() < 5 {
        return Err(GeomError::TooFewPoints { needed: 5, got: lines.len() });
    }
    let feet: Vec<Point> = lines.iter().map(|l| l.foot(Point::ORIGIN)).collect();
    let (shift, scale) = normalization(&feet)?;
    let rows: Vec<[f64; 6]> = lines
        .iter()
        .map(|l| {
            let (a, b, c) = (l.a, l.b, (l.a * shift.x + l.b * shift.y + l.c) / scale);
            [a * a, a * b, b * b, a * c, b * c, c * c]
        })
        .collect();
    let (dual, residual, separation) = null_vector(&rows);
    if separation < 1e-9 {
        return Err(GeomError::RankDeficient(separation));
    }
    let point_matrix = coeffs_to_matrix(&dual).try_inverse().ok_or(GeomError::DegenerateConic)?;
    let normalized = matrix_to_coeffs(&point_matrix);
    Ok(finish_fit(normalized, shift, scale, residual, separation, CLASSIFY_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn on_circle(n: usize) -> Vec<Point> {
        (0..n).map(|i| Point::polar(1.0, 0.3 + i as f64 * 2.0 * PI / n as f64)).collect()
    }

    #[test]
    fn five_points_on_unit_circle() {
        let fit = conic_from_points(&on_circle(5)).unwrap();
        assert_eq!(fit.kind(), ConicKind::Circle);
        match fit.conic.principal_form().unwrap() {
            PrincipalForm::Central { center, a, b, .. } => {
                assert!(center.norm() < 1e-12);
                assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn interpolates_parabola() {
        let pts: Vec<Point> = (-2..=2).map(|t| Point::new(t as f64, (t * t) as f64)).collect();
        let fit = conic_from_points(&pts).unwrap();
        assert_eq!(fit.kind(), ConicKind::Parabola);
        let expected = Conic::new([1.0, 0.0, 0.0, 0.0, -1.0, 0.0]);
        assert!(fit.conic.coefficient_distance(&expected) < 1e-12);
    }

    #[test]
    fn collinear_points_are_rank_deficient() {
        let pts: Vec<Point> = (0..8).map(|i| Point::new(i as f64, 2.0 * i as f64 + 1.0)).collect();
        assert!(matches!(conic_from_points(&pts), Err(GeomError::RankDeficient(_))));
        assert!(matches!(conic_from_points(&pts[..4]), Err(GeomError::TooFewPoints { needed: 5, got: 4 })));
    }

    #[test]
    fn classify_examples() {
        let tol = CLASSIFY_TOL;
        assert_eq!(Conic::new([1.0, 0.0, 1.0, 0.0, 0.0, -1.0]).classify(tol), Ok(ConicKind::Circle));
        assert_eq!(Conic::new([1.0, 0.0, -1.0, 0.0, 0.0, -1.0]).classify(tol), Ok(ConicKind::Hyperbola));
        assert_eq!(Conic::new([1.0, 0.0, 0.0, 0.0, -1.0, 0.0]).classify(tol), Ok(ConicKind::Parabola));
        assert_eq!(Conic::new([1.0, 0.0, 1.0, 0.0, 0.0, 1.0]).classify(tol), Ok(ConicKind::Empty));
        // x^2 - y^2 = 0, a line pair
        assert_eq!(Conic::new([1.0, 0.0, -1.0, 0.0, 0.0, 0.0]).classify(tol), Err(GeomError::DegenerateConic));
    }

    #[test]
    fn foci_of_ellipse_and_parabola() {
        let e = Conic::new([0.25, 0.0, 1.0, 0.0, 0.0, -1.0]);
        let FocalData::Foci(f1, f2) = e.foci().unwrap() else { panic!() };
        let s3 = 3f64.sqrt();
        assert!((f1.x.abs() - s3).abs() < 1e-12 && (f1.x + f2.x).abs() < 1e-12);
        assert!(f1.y.abs() < 1e-12 && f2.y.abs() < 1e-12);

        let p = Conic::new([1.0, 0.0, 0.0, 0.0, -4.0, 0.0]);
        let FocalData::FocusDirectrix { focus, directrix } = p.foci().unwrap() else { panic!() };
        assert!(focus.distance(Point::new(0.0, 1.0)) < 1e-12);
        assert_eq!((directrix.a, directrix.b), (0.0, 1.0));
        assert!((directrix.c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dual_fit_recovers_ellipse_from_tangents() {
        let e = Conic::ellipse(Point::new(1.0, -2.0), 0.4, 3.0, 1.5);
        let PrincipalForm::Central { center, axis, a, b, .. } = e.principal_form().unwrap() else { panic!() };
        let lines: Vec<Line> = (0..12)
            .map(|i| {
                let t = 0.1 + i as f64 * 0.5;
                let p = center + axis * (a * t.cos()) + axis.perp() * (b * t.sin());
                let tangent = axis * (-a * t.sin()) + axis.perp() * (b * t.cos());
                Line::through(p, p + tangent)
            })
            .collect();
        let fit = conic_from_tangent_lines(&lines).unwrap();
        assert_eq!(fit.kind(), ConicKind::Ellipse);
        assert!(fit.conic.coefficient_distance(&e) < 1e-10);
    }

    proptest! {
        #[test]
        fn fit_reproduces_exact_conics(cx in -5.0..5.0f64, cy in -5.0..5.0f64, ang in 0.0..3.1f64,
                                       a in 0.5..5.0f64, ratio in 0.1..0.95f64, hyper in any::<bool>()) {
            let b = a * ratio;
            let conic = if hyper { Conic::hyperbola(Point::new(cx, cy), ang, a, b) }
                        else { Conic::ellipse(Point::new(cx, cy), ang, a, b) };
            let u = Point::polar(1.0, ang);
            let pts: Vec<Point> = (0..40).map(|i| {
                let t = -1.2 + i as f64 * 0.06;
                let (x, y) = if hyper { (a * t.cosh(), b * t.sinh()) } else { (a * (3.0 * t).cos(), b * (3.0 * t).sin()) };
                Point::new(cx, cy) + u * x + u.perp() * y
            }).collect();
            let fit = conic_from_points(&pts).unwrap();
            prop_assert!(fit.residual_rms < 1e-10);
            prop_assert!(fit.conic.coefficient_distance(&conic) < 1e-8);
        }

        #[test]
        fn foci_are_recovered(cx in -5.0..5.0f64, cy in -5.0..5.0f64, ang in 0.0..3.1f64,
                              a in 0.5..5.0f64, ratio in 0.1..0.95f64, hyper in any::<bool>()) {
            let b = a * ratio;
            let center = Point::new(cx, cy);
            let conic = if hyper { Conic::hyperbola(center, ang, a, b) } else { Conic::ellipse(center, ang, a, b) };
            let c = if hyper { a.hypot(b) } else { (a * a - b * b).sqrt() };
            let u = Point::polar(1.0, ang);
            let FocalData::Foci(f1, f2) = conic.foci().unwrap() else { panic!() };
            let (e1, e2) = (center + u * c, center - u * c);
            let err = (f1.distance(e1) + f2.distance(e2)).min(f1.distance(e2) + f2.distance(e1));
            prop_assert!(err <= 1e-10 * (center.norm() + c).max(1.0));
        }

        #[test]
        fn parabola_focus_directrix(vx in -5.0..5.0f64, vy in -5.0..5.0f64, ang in 0.0..6.2f64, f in 0.1..4.0f64) {
            let vertex = Point::new(vx, vy);
            let conic = Conic::parabola(vertex, ang, f);
            prop_assert_eq!(conic.kind, ConicKind::Parabola);
            let FocalData::FocusDirectrix { focus, directrix } = conic.foci().unwrap() else { panic!() };
            let expected = vertex + Point::polar(f, ang);
            prop_assert!(focus.distance(expected) <= 1e-9 * (vertex.norm() + f).max(1.0));
            prop_assert!((directrix.distance(vertex) - f).abs() <= 1e-9 * (vertex.norm() + f).max(1.0));
        }
    }
}

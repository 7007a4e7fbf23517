//! Explicit formulas in `(N, R, x0, lambda)` for the caustic, the outer
//! conic, the Brocard inellipse and several N = 3 triangle-center loci.
//!
//! These are hypotheses checked against numeric constructions; where the
//! printed expressions are ambiguous the reading that matches the
//! construction is used (see the individual functions).

use super::PorismConfig;
use crate::error::PorismError;
use crate::geom::{Circle, Point};

/// Relative size below which a denominator is treated as vanishing.
const SINGULAR_REL: f64 = 1e-12;

fn guard(den: f64, scale: f64, name: &'static str) -> Result<f64, PorismError> {
    if den.abs() <= SINGULAR_REL * scale.abs().max(f64::MIN_POSITIVE) || !den.is_finite() {
        Err(PorismError::FormulaSingular(name))
    } else {
        Ok(den)
    }
}

/// Caustic `(I, r)`: the image of the pre-image incircle.
///
/// The center's printed abscissa carries a factor 2 in both numerator and
/// denominator; the cancelled form is used.
pub fn caustic(cfg: &PorismConfig) -> Result<Circle, PorismError> {
    let (r, x0, l) = (cfg.r(), cfg.x0(), cfg.lambda());
    let c = cfg.alpha().cos();
    let den = r * r * c * c - x0 * x0;
    if den.abs() <= SINGULAR_REL * r * r {
        return Err(PorismError::CausticSingular);
    }
    Ok(Circle::new(Point::new(x0 + x0 * l * l / den, 0.0), l * l * r * c / den.abs()))
}

/// Foci abscissas and vertex abscissa of the outer conic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterConicForm {
    pub f1: Point,
    pub f2: Point,
    pub vertex_x: f64,
}

pub fn outer_conic(cfg: &PorismConfig) -> Result<OuterConicForm, PorismError> {
    let (r, x0, l) = (cfg.r(), cfg.x0(), cfg.lambda());
    let (s, c) = cfg.alpha().sin_cos();
    let (r2, c2, x2, l2) = (r * r, c * c, x0 * x0, l * l);
    let scale = (r2 + x2).powi(2);
    let den = guard(r2 * r2 * c2 * c2 + 2.0 * r2 * c2 * x2 - 4.0 * r2 * x2 + x2 * x2, scale, "outer conic foci")?;
    let focus = |sign: f64| {
        x0 * (r2 * r2 * c2 * c2 - r2 * c2 * (l2 - 2.0 * x2) + sign * 2.0 * r2 * s * l2 + 2.0 * r2 * (l2 - 2.0 * x2)
            - x2 * (l2 - x2))
            / den
    };
    let cos2a = (2.0 * cfg.alpha()).cos();
    let vden = guard(r2 * cos2a + r2 - 4.0 * r * x0 + 2.0 * x2, r2 + x2, "outer conic vertex")?;
    let vertex_x = (cos2a * r2 * x0 + r * (r * x0 + 2.0 * l2 - 4.0 * x2) - 2.0 * x0 * (l2 - x2)) / vden;
    Ok(OuterConicForm { f1: Point::new(focus(1.0), 0.0), f2: Point::new(focus(-1.0), 0.0), vertex_x })
}

/// Brocard inellipse (caustic of the pedal family), axes parallel to the
/// coordinate axes. `a` is the semi-axis along x, `b` along y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrocardForm {
    pub center: Point,
    pub a: f64,
    pub b: f64,
    /// Sign of the printed `a'` expression before taking the absolute value.
    pub a_printed_negative: bool,
}

impl BrocardForm {
    /// `b / a`; equals `sqrt(5) / 2` for N = 3 in the parabola regime.
    pub fn aspect_ratio(&self) -> f64 {
        self.b / self.a
    }
}

/// The center's printed denominator term `2 R^2 x_02 cos^2(alpha)` is read as
/// `2 R^2 x0^2 cos^2(alpha)`, consistent with the semi-axis denominators.
pub fn brocard_inellipse(cfg: &PorismConfig) -> Result<BrocardForm, PorismError> {
    let (r, x0, l) = (cfg.r(), cfg.x0(), cfg.lambda());
    let c = cfg.alpha().cos();
    let (r2, c2, x2, l2) = (r * r, c * c, x0 * x0, l * l);
    let den =
        guard(r2 * (r2 - 4.0 * x2) * c2 * c2 + 2.0 * r2 * x2 * c2 + x2 * x2, (r2 + x2).powi(2), "Brocard inellipse")?;
    if den < 0.0 {
        return Err(PorismError::FormulaSingular("Brocard inellipse"));
    }
    let cos2a = (2.0 * cfg.alpha()).cos();
    let center = Point::new(x0 + l2 * x0 * (r2 * c2 * cos2a - x2) / den, 0.0);
    let a = l2 * r * (x2 - r2 * c2) * c2 / den;
    let b = l2 * r * c2 / den.sqrt();
    Ok(BrocardForm { center, a: a.abs(), b: b.abs(), a_printed_negative: a < 0.0 })
}

/// Axis-aligned conic `A x^2 + C y^2 + D x + F = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisConic {
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
}

impl AxisConic {
    pub fn coeffs(&self) -> [f64; 6] {
        [self.a, 0.0, self.c, self.d, 0.0, self.f]
    }

    /// Value at `p` divided by the largest coefficient magnitude.
    pub fn normalized_eval(&self, p: Point) -> f64 {
        let m = [self.a, self.c, self.d, self.f].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (self.a * p.x * p.x + self.c * p.y * p.y + self.d * p.x + self.f) / m
    }
}

fn require_triangle(cfg: &PorismConfig) -> Result<(f64, f64, f64), PorismError> {
    if cfg.n() != 3 {
        return Err(PorismError::InvalidConfig(format!("locus formulas need N = 3, got {}", cfg.n())));
    }
    Ok((cfg.r(), cfg.x0(), cfg.lambda()))
}

/// Locus of the centroid.
pub fn x2_conic(cfg: &PorismConfig) -> Result<AxisConic, PorismError> {
    let (r, x, l) = require_triangle(cfg)?;
    let (r2, x2, l2) = (r * r, x * x, l * l);
    let (r4, r6, x4, x6, l4) = (r2 * r2, r2 * r2 * r2, x2 * x2, x2 * x2 * x2, l2 * l2);
    let q = r2 - 4.0 * x2;
    Ok(AxisConic {
        a: q * (r4 - 56.0 * r2 * x2 + 16.0 * x4),
        c: q * q * q,
        d: -2.0
            * x
            * (r6 - 60.0 * r4 * x2 + 12.0 * r4 * l2 + 240.0 * r2 * x4 - 192.0 * r2 * x2 * l2 - 64.0 * x6
                + 64.0 * x4 * l2),
        f: x2
            * (r6 - 60.0 * r4 * x2 + 24.0 * r4 * l2 + 240.0 * r2 * x4 - 384.0 * r2 * x2 * l2 + 144.0 * r2 * l4
                - 64.0 * x6
                + 128.0 * x4 * l2
                - 64.0 * x2 * l4),
    })
}

/// Locus of the circumcenter.
pub fn x3_conic(cfg: &PorismConfig) -> Result<AxisConic, PorismError> {
    let (r, x, l) = require_triangle(cfg)?;
    let (r2, x2, l2) = (r * r, x * x, l * l);
    let p = |e: i32| r.powi(e);
    let xp = |e: i32| x.powi(e);
    let q = r2 - 4.0 * x2;
    let l4 = l2 * l2;
    Ok(AxisConic {
        a: (p(4) - 56.0 * r2 * x2 + 16.0 * xp(4)) * q.powi(4),
        c: q * q * (p(4) + 40.0 * r2 * x2 + 16.0 * xp(4)).powi(2),
        d: -2.0
            * x
            * q
            * (p(10) - 68.0 * p(8) * x2 + 28.0 * p(8) * l2 + 736.0 * p(6) * xp(4)
                - 928.0 * p(6) * x2 * l2
                - 2944.0 * p(4) * xp(6)
                - 768.0 * p(4) * xp(4) * l2
                + 4352.0 * r2 * xp(8)
                - 2560.0 * r2 * xp(6) * l2
                - 1024.0 * xp(10)
                + 1024.0 * xp(8) * l2),
        f: x2
            * (p(12) + (-72.0 * x2 + 56.0 * l2) * p(10) + (1008.0 * xp(4) - 2080.0 * x2 * l2 + 784.0 * l4) * p(8)
                - 256.0 * x2 * (23.0 * xp(4) - 23.0 * x2 * l2 + 16.0 * l4) * p(6)
                + 256.0 * xp(4) * (63.0 * xp(4) + 4.0 * x2 * l2 - 18.0 * l4) * p(4)
                - 2048.0 * xp(6) * (x2 - l2) * (9.0 * x2 - 2.0 * l2) * r2
                + 4096.0 * xp(8) * (x2 - l2).powi(2)),
    })
}

/// Locus of the orthocenter. The x-coefficient line carries no printed
/// operator; it enters with a plus sign.
pub fn x4_conic(cfg: &PorismConfig) -> Result<AxisConic, PorismError> {
    let (r, x, l) = require_triangle(cfg)?;
    let (r2, x2, l2) = (r * r, x * x, l * l);
    let p = |e: i32| r.powi(e);
    let xp = |e: i32| x.powi(e);
    let q = r2 - 4.0 * x2;
    let l4 = l2 * l2;
    Ok(AxisConic {
        a: q.powi(4),
        c: (p(4) - 56.0 * r2 * x2 + 16.0 * xp(4)) * q * q,
        d: x * (-2.0 * p(8) + 32.0 * p(6) * x2 + 40.0 * p(6) * l2 - 192.0 * p(4) * xp(4)
            + 96.0 * p(4) * x2 * l2
            + 512.0 * r2 * xp(6)
            - 1152.0 * r2 * xp(4) * l2
            - 512.0 * xp(8)
            + 512.0 * xp(6) * l2),
        f: x2
            * (p(8) - 16.0 * p(6) * x2 - 40.0 * p(6) * l2 + 96.0 * p(4) * xp(4) - 96.0 * p(4) * x2 * l2
                + 400.0 * p(4) * l4
                - 256.0 * r2 * xp(6)
                + 1152.0 * r2 * xp(4) * l2
                - 896.0 * r2 * x2 * l4
                + 256.0 * xp(8)
                - 512.0 * xp(6) * l2
                + 256.0 * xp(4) * l4),
    })
}

/// Sign joining `R^10` and `(8 lambda^2 + 4 x0^2) R^8` in the constant
/// term of the symmedian locus, where no operator is printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum X6Reading {
    Minus,
    Plus,
}

/// Locus of the symmedian point, with the constant term read as
/// `R^10 - (8 lambda^2 + 4 x0^2) R^8 + ...`.
pub fn x6_conic(cfg: &PorismConfig) -> Result<AxisConic, PorismError> {
    x6_conic_reading(cfg, X6Reading::Minus)
}

pub fn x6_conic_reading(cfg: &PorismConfig, reading: X6Reading) -> Result<AxisConic, PorismError> {
    let (r, x, l) = require_triangle(cfg)?;
    let (r2, x2, l2) = (r * r, x * x, l * l);
    let p = |e: i32| r.powi(e);
    let xp = |e: i32| x.powi(e);
    let q = r2 - 4.0 * x2;
    let s = (r2 + 4.0 * x2).powi(2);
    let l4 = l2 * l2;
    let sign = match reading {
        X6Reading::Minus => -1.0,
        X6Reading::Plus => 1.0,
    };
    Ok(AxisConic {
        a: q * (p(8) + 544.0 * p(4) * xp(4) + 256.0 * xp(8)) * s,
        c: (p(4) + 16.0 * xp(4)).powi(2) * q.powi(3),
        d: -2.0
            * x
            * s
            * (p(10) - 4.0 * p(8) * l2 - 4.0 * p(8) * x2 - 160.0 * p(6) * l2 * x2
                + 544.0 * p(6) * xp(4)
                + 1536.0 * p(4) * l2 * xp(4)
                - 2176.0 * p(4) * xp(6)
                - 512.0 * r2 * l2 * xp(6)
                + 256.0 * r2 * xp(8)
                + 1024.0 * l2 * xp(8)
                - 1024.0 * xp(10)),
        f: x2
            * s
            * (p(10) + sign * (8.0 * l2 + 4.0 * x2) * p(8) + (16.0 * l4 - 320.0 * l2 * x2 + 544.0 * xp(4)) * p(6)
                - 64.0 * x2 * (15.0 * l4 - 48.0 * l2 * x2 + 34.0 * xp(4)) * p(4)
                + 256.0 * xp(4) * (l2 - x2) * (3.0 * l2 - x2) * r2
                - 1024.0 * xp(6) * (l2 - x2).powi(2)),
    })
}

/// Circle traced by the first isodynamic point when the inversion center
/// lies inside the inner pre-image Soddy circle.
pub fn x15_circle(cfg: &PorismConfig) -> Result<Circle, PorismError> {
    let (r, x, l) = require_triangle(cfg)?;
    let (r2, x2, l2) = (r * r, x * x, l * l);
    let den = guard(
        r2 * r2 * r2 - 24.0 * r2 * r2 * x2 + 144.0 * r2 * x2 * x2 - 256.0 * x2 * x2 * x2,
        (r2 + 4.0 * x2).powi(3),
        "X15 circle",
    )?;
    let cx = x
        * (-256.0 * x2 * x2 * x2 + 144.0 * r2 * x2 * x2 - 24.0 * (r2 * r2 + 6.0 * r2 * l2) * x2
            + r2 * r2 * r2
            + 12.0 * r2 * r2 * l2)
        / den;
    let rad = (36864.0 * r2 * x2.powi(4) * l2 * l2 / (den * den)).sqrt();
    if rad == 0.0 {
        return Err(PorismError::FormulaSingular("X15 circle (zero radius)"));
    }
    Ok(Circle::new(Point::new(cx, 0.0), rad))
}

/// The de Longchamps point's segment on the x-axis, as printed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct X20Segment {
    /// The expression printed as `X20^+`.
    pub printed_plus: f64,
    /// The expression printed as `X20^-`.
    pub printed_minus: f64,
    pub length: f64,
}

impl X20Segment {
    /// `(min, max)` of the two printed endpoints. The expression labelled
    /// `X20^+` evaluates to the smaller abscissa.
    pub fn endpoints(&self) -> (f64, f64) {
        (self.printed_plus.min(self.printed_minus), self.printed_plus.max(self.printed_minus))
    }
}

pub fn x20_segment(cfg: &PorismConfig) -> Result<X20Segment, PorismError> {
    let (r, x, l) = require_triangle(cfg)?;
    let (r2, x2, l2) = (r * r, x * x, l * l);
    let r4 = r2 * r2;
    let zeta = r4 * r2 + (76.0 * l2 - 28.0 * x2) * r4 + 16.0 * x2 * (12.0 * l2 + 7.0 * x2) * r2;
    let scale = (r + 2.0 * x).powi(6);
    let dp = guard((r2 + 8.0 * r * x + 4.0 * x2) * (r - 2.0 * x).powi(3) * (r + 2.0 * x), scale, "X20 endpoint")?;
    let dm = guard((r2 - 8.0 * r * x + 4.0 * x2) * (r + 2.0 * x).powi(3) * (r - 2.0 * x), scale, "X20 endpoint")?;
    let printed_plus =
        x * (zeta + 4.0 * x * r4 * r + 304.0 * r2 * r * x * l2 - 64.0 * x2 * x * (x2 - l2) * (r + x)) / dp;
    let printed_minus =
        x * (zeta - 4.0 * x * r4 * r - 304.0 * r2 * r * x * l2 + 64.0 * x2 * x * (x2 - l2) * (r - x)) / dm;
    let dl = guard((r2 - 4.0 * x2).powi(3) * (r4 - 56.0 * r2 * x2 + 16.0 * x2 * x2), scale, "X20 length")?;
    let length = 18432.0 * x2 * x2 * r4 * r * l2 / dl;
    Ok(X20Segment { printed_plus, printed_minus, length })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{chain_at, classify_regime, Regime};
    use crate::geom::{conic_from_points, FocalData, GCircle, PrincipalForm};
    use crate::tolerance::ToleranceSet;
    use proptest::prelude::*;

    #[test]
    fn centered_inversion_reductions() {
        let c = PorismConfig::new(4, 1.3, 0.0, 0.7).unwrap();
        let cos_a = c.alpha().cos();
        let k = caustic(&c).unwrap();
        assert!(k.center.norm() < 1e-15);
        assert!((k.radius - 0.49 / (1.3 * cos_a)).abs() < 1e-15);
        let o = outer_conic(&c).unwrap();
        assert_eq!((o.f1.x, o.f2.x), (0.0, 0.0));
        let b = brocard_inellipse(&c).unwrap();
        assert!(b.center.norm() < 1e-15);
        assert!((b.a - 0.49 / 1.3).abs() < 1e-14 && (b.b - 0.49 / 1.3).abs() < 1e-14);
        assert!(b.a_printed_negative);
    }

    #[test]
    fn reference_caustic_value() {
        // N = 3, R = 1, lambda = 1, x0 = 0.1: den = 0.25 - 0.01 = 0.24
        let c = PorismConfig::new(3, 1.0, 0.1, 1.0).unwrap();
        let k = caustic(&c).unwrap();
        assert!((k.center.x - (0.1 + 0.1 / 0.24)).abs() < 1e-15);
        assert!((k.radius - 0.5 / 0.24).abs() < 1e-14);
        let ch = chain_at(&c, 0.3).unwrap();
        let t = Circle::through(ch.contacts[0], ch.contacts[1], ch.contacts[2]).unwrap();
        assert!(t.center.distance(k.center) < 1e-12 && (t.radius - k.radius).abs() < 1e-12);
    }

    #[test]
    fn parabola_aspect_ratio() {
        let c = PorismConfig::parabolic(3, 1.0, 1.0, false).unwrap();
        let b = brocard_inellipse(&c).unwrap();
        assert!((b.aspect_ratio() - 5f64.sqrt() / 2.0).abs() < 1e-12);
    }

    fn configs() -> impl Strategy<Value = PorismConfig> {
        (3usize..9, 0.5..2.0f64, 0.0..2.2f64, 0.3..2.0f64).prop_filter_map("valid", |(n, r, x, l)| {
            let c = PorismConfig::new(n, r, x * r, l).ok()?;
            let s = c.alpha().sin();
            let far = |b: f64| (c.x0() - b).abs() > 0.02 * r;
            (far(r * (1.0 - s)) && far(r * (1.0 + s)) && far(r * c.alpha().cos()) && c.x0() > 1e-3).then_some(c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn caustic_matches_construction(c in configs()) {
            let k = caustic(&c).unwrap();
            for j in 0..8 {
                let Ok(ch) = chain_at(&c, c.sample_phase(j, 8)) else { continue };
                prop_assert!(ch.caustic.center.distance(k.center) <= 1e-9 * k.radius.max(k.center.norm()));
                prop_assert!((ch.caustic.radius - k.radius).abs() <= 1e-9 * k.radius);
            }
        }

        #[test]
        fn foci_are_soddy_image_centers(c in configs()) {
            prop_assume!(classify_regime(&c, &ToleranceSet::default()) == Regime::Ellipse);
            let o = outer_conic(&c).unwrap();
            let ch = chain_at(&c, 0.1).unwrap();
            let (GCircle::Circle(a), GCircle::Circle(b)) = (ch.soddy_inner, ch.soddy_outer) else { panic!() };
            let scale = a.center.norm().max(b.center.norm()).max(1.0);
            let err = (o.f1.distance(a.center) + o.f2.distance(b.center)).min(o.f1.distance(b.center) + o.f2.distance(a.center));
            prop_assert!(err < 1e-9 * scale);
        }

        #[test]
        fn foci_match_fitted_outer_conic(c in configs()) {
            prop_assume!(classify_regime(&c, &ToleranceSet::default()) == Regime::Ellipse);
            let pts: Vec<Point> = (0..12).flat_map(|j| chain_at(&c, c.sample_phase(j, 12)).unwrap().centers()).collect();
            let fit = conic_from_points(&pts).unwrap();
            let FocalData::Foci(g1, g2) = fit.conic.foci().unwrap() else { panic!() };
            let o = outer_conic(&c).unwrap();
            let scale = pts.iter().map(|p| p.norm()).fold(1.0, f64::max);
            let err = (o.f1.distance(g1) + o.f2.distance(g2)).min(o.f1.distance(g2) + o.f2.distance(g1));
            prop_assert!(err < 1e-6 * scale, "err {err}");
            let PrincipalForm::Central { center, axis, a, .. } = fit.conic.principal_form().unwrap() else { panic!() };
            let (v1, v2) = ((center + axis * a).x, (center - axis * a).x);
            let verr = (o.vertex_x - v1).abs().min((o.vertex_x - v2).abs());
            prop_assert!(verr < 1e-6 * scale, "vertex {} vs {v1} {v2}", o.vertex_x);
        }
    }
}

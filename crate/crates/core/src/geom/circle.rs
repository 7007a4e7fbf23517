use super::{Line, Point};
use crate::error::GeomError;
use serde::{Deserialize, Serialize};

/// Default relative threshold (times the inversion radius) below which a
/// curve is considered to pass through the inversion center.
pub const THROUGH_CENTER_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius > 0.0, "circle radius must be positive, got {radius}");
        Self { center, radius }
    }

    /// Circle through three points, `None` when they are collinear.
    pub fn through(a: Point, b: Point, c: Point) -> Option<Self> {
        let (ab, ac) = (b - a, c - a);
        let d = 2.0 * ab.cross(ac);
        if d.abs() < 1e-300 {
            return None;
        }
        let (b2, c2) = (ab.norm_sq(), ac.norm_sq());
        let off = Point::new(ac.y * b2 - ab.y * c2, ab.x * c2 - ac.x * b2) / d;
        Some(Self::new(a + off, off.norm()))
    }

    pub fn curvature(&self) -> f64 {
        1.0 / self.radius
    }

    pub fn point_at(&self, angle: f64) -> Point {
        self.center + Point::polar(self.radius, angle)
    }

    /// Signed distance from `p` to the circumference (negative inside).
    pub fn boundary_distance(&self, p: Point) -> f64 {
        p.distance(self.center) - self.radius
    }

    pub fn contains(&self, p: Point) -> bool {
        self.boundary_distance(p) < 0.0
    }

    /// Tangent line at the boundary point closest to `p`.
    pub fn tangent_at(&self, p: Point) -> Line {
        let n = (p - self.center).normalized();
        Line::with_normal(n, self.center + n * self.radius)
    }
}

/// A circle or a line: the class of curves closed under inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GCircle {
    Circle(Circle),
    Line(Line),
}

impl GCircle {
    pub fn as_circle(&self) -> Option<&Circle> {
        match self {
            GCircle::Circle(c) => Some(c),
            GCircle::Line(_) => None,
        }
    }

    pub fn as_line(&self) -> Option<&Line> {
        match self {
            GCircle::Line(l) => Some(l),
            GCircle::Circle(_) => None,
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, GCircle::Line(_))
    }

    /// Distance from `p` to the curve.
    pub fn distance(&self, p: Point) -> f64 {
        match self {
            GCircle::Circle(c) => c.boundary_distance(p).abs(),
            GCircle::Line(l) => l.distance(p),
        }
    }

    /// How far the two curves are from touching; zero for tangent curves.
    ///
    /// For two circles this is the smaller of the internal and external
    /// tangency defects; two lines are tangent only when parallel.
    pub fn tangency_defect(&self, other: &GCircle) -> f64 {
        match (self, other) {
            (GCircle::Circle(a), GCircle::Circle(b)) => {
                let d = a.center.distance(b.center);
                let ext = (d - (a.radius + b.radius)).abs();
                let int = (d - (a.radius - b.radius).abs()).abs();
                ext.min(int)
            }
            (GCircle::Circle(c), GCircle::Line(l)) | (GCircle::Line(l), GCircle::Circle(c)) => {
                (l.distance(c.center) - c.radius).abs()
            }
            (GCircle::Line(a), GCircle::Line(b)) => a.normal().cross(b.normal()).abs(),
        }
    }
}

pub fn invert_point(p: Point, inv: &Circle) -> Result<Point, GeomError> {
    let d = p - inv.center;
    let d2 = d.norm_sq();
    if d2.sqrt() <= inv.radius * 1e-14 {
        return Err(GeomError::PointAtInversionCenter);
    }
    Ok(inv.center + d * (inv.radius * inv.radius / d2))
}

pub fn invert_gcircle(g: &GCircle, inv: &Circle) -> GCircle {
    invert_gcircle_with(g, inv, THROUGH_CENTER_REL)
}

/// Inversion of a generalized circle, covering all four circle/line cases.
///
/// `through_rel` scales the inversion radius to give the distance below which
/// the curve is treated as passing through the inversion center.
pub fn invert_gcircle_with(g: &GCircle, inv: &Circle, through_rel: f64) -> GCircle {
    let o = inv.center;
    let k = inv.radius * inv.radius;
    let eps = inv.radius * through_rel;
    match g {
        GCircle::Circle(c) => {
            let v = c.center - o;
            let d = v.norm();
            if (d - c.radius).abs() < eps {
                // circle through o maps to the line perpendicular to v at distance k/(2 rho)
                let n = v / d;
                GCircle::Line(Line::with_normal(n, o + n * (k / (2.0 * c.radius))))
            } else {
                let den = v.norm_sq() - c.radius * c.radius;
                GCircle::Circle(Circle::new(o + v * (k / den), k * c.radius / den.abs()))
            }
        }
        GCircle::Line(l) => {
            let delta = l.signed_distance(o);
            if delta.abs() < eps {
                GCircle::Line(*l)
            } else {
                let far = o - l.normal() * (k / delta);
                GCircle::Circle(Circle::new(o.midpoint(far), k / (2.0 * delta.abs())))
            }
        }
    }
}

/// Polar of `p` with respect to `inv`: the line `(x - o).(p - o) = lambda^2`.
pub fn polar_line(p: Point, inv: &Circle) -> Result<Line, GeomError> {
    let v = p - inv.center;
    let d = v.norm();
    if d <= inv.radius * 1e-14 {
        return Err(GeomError::PointAtInversionCenter);
    }
    let n = v / d;
    Ok(Line::with_normal(n, inv.center + n * (inv.radius * inv.radius / d)))
}

/// Pole of `l` with respect to `inv`; inverse of [`polar_line`].
pub fn pole_point(l: &Line, inv: &Circle) -> Result<Point, GeomError> {
    let delta = l.signed_distance(inv.center);
    if delta.abs() <= inv.radius * 1e-14 {
        return Err(GeomError::LineThroughCenter);
    }
    Ok(inv.center - l.normal() * (inv.radius * inv.radius / delta))
}

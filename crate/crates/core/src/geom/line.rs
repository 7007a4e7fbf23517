use super::Point;
use crate::error::GeomError;
use serde::{Deserialize, Serialize};

/// Implicit line `a x + b y + c = 0` with `a^2 + b^2 = 1`.
///
/// The sign is fixed so that `a > 0`, or `a == 0` and `b > 0`; two lines are
/// the same set exactly when their coefficients agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Line {
    /// Builds a canonical line from arbitrary (not both zero) coefficients.
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        let n = a.hypot(b);
        let (mut a, mut b, mut c) = (a / n, b / n, c / n);
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            a = -a;
            b = -b;
            c = -c;
        }
        // avoid signed zeros in golden output
        Self { a: a + 0.0, b: b + 0.0, c: c + 0.0 }
    }

    pub fn through(p: Point, q: Point) -> Self {
        let d = q - p;
        Self::new(-d.y, d.x, d.y * p.x - d.x * p.y)
    }

    /// Line through `p` with the given unit normal direction.
    pub fn with_normal(normal: Point, p: Point) -> Self {
        Self::new(normal.x, normal.y, -normal.dot(p))
    }

    pub fn normal(&self) -> Point {
        Point::new(self.a, self.b)
    }

    pub fn direction(&self) -> Point {
        Point::new(-self.b, self.a)
    }

    pub fn signed_distance(&self, p: Point) -> f64 {
        self.a * p.x + self.b * p.y + self.c
    }

    pub fn distance(&self, p: Point) -> f64 {
        self.signed_distance(p).abs()
    }

    pub fn foot(&self, p: Point) -> Point {
        p - self.normal() * self.signed_distance(p)
    }

    pub fn reflect(&self, p: Point) -> Point {
        p - self.normal() * (2.0 * self.signed_distance(p))
    }

    pub fn intersect(&self, other: &Line) -> Result<Point, GeomError> {
        let det = self.a * other.b - self.b * other.a;
        if det.abs() < 1e-14 {
            return Err(GeomError::ParallelLines);
        }
        Ok(Point::new((self.b * other.c - self.c * other.b) / det, (self.c * other.a - self.a * other.c) / det))
    }

    /// Unsigned angle between the two lines, in `[0, pi/2]`.
    pub fn angle_to(&self, other: &Line) -> f64 {
        let cos = self.normal().dot(other.normal()).abs().min(1.0);
        let sin = self.normal().cross(other.normal()).abs();
        sin.atan2(cos)
    }
}

//! Triangle centers from trilinear coordinates, the intouch triangle and
//! the Soddy circles of a triangle.

use crate::error::{GeomError, PorismError};
use crate::geom::{Circle, Point};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_3;

/// A triangle with positive (counterclockwise) orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

/// Side lengths and angles; `la` is the side opposite vertex `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleShape {
    pub la: f64,
    pub lb: f64,
    pub lc: f64,
    pub angle_a: f64,
    pub angle_b: f64,
    pub angle_c: f64,
}

fn angle_at(p: Point, q: Point, r: Point) -> f64 {
    let (u, v) = (q - p, r - p);
    u.cross(v).abs().atan2(u.dot(v))
}

impl Triangle {
    /// Reorders to counterclockwise; rejects collinear or coincident vertices.
    pub fn new(a: Point, b: Point, c: Point) -> Result<Self, GeomError> {
        let area2 = (b - a).cross(c - a);
        let scale = (b - a).norm_sq().max((c - a).norm_sq()).max((c - b).norm_sq());
        if !(area2.abs() > 1e-14 * scale) {
            return Err(GeomError::ZeroArea);
        }
        Ok(if area2 > 0.0 { Self { a, b, c } } else { Self { a, b: c, c: b } })
    }

    pub fn vertices(&self) -> [Point; 3] {
        [self.a, self.b, self.c]
    }

    pub fn shape(&self) -> TriangleShape {
        TriangleShape {
            la: self.b.distance(self.c),
            lb: self.c.distance(self.a),
            lc: self.a.distance(self.b),
            angle_a: angle_at(self.a, self.b, self.c),
            angle_b: angle_at(self.b, self.c, self.a),
            angle_c: angle_at(self.c, self.a, self.b),
        }
    }

    pub fn area(&self) -> f64 {
        0.5 * (self.b - self.a).cross(self.c - self.a)
    }

    pub fn semiperimeter(&self) -> f64 {
        let s = self.shape();
        0.5 * (s.la + s.lb + s.lc)
    }

    pub fn inradius(&self) -> f64 {
        self.area() / self.semiperimeter()
    }

    pub fn incircle(&self) -> Circle {
        let s = self.shape();
        let p = (self.a * s.la + self.b * s.lb + self.c * s.lc) / (s.la + s.lb + s.lc);
        Circle::new(p, self.inradius())
    }

    fn is_equilateral(&self) -> bool {
        let s = self.shape();
        let m = s.la.max(s.lb).max(s.lc);
        (s.la - s.lb).abs() <= 1e-12 * m && (s.lb - s.lc).abs() <= 1e-12 * m
    }
}

/// Cartesian point of the trilinear triple `(alpha : beta : gamma)`, via the
/// normalized barycentrics `(a alpha, b beta, c gamma)`.
pub fn center_from_trilinear(tri: &Triangle, trilinear: [f64; 3]) -> Result<Point, GeomError> {
    let s = tri.shape();
    let w = [s.la * trilinear[0], s.lb * trilinear[1], s.lc * trilinear[2]];
    let sum = w[0] + w[1] + w[2];
    let mag = w.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if !sum.is_finite() || sum.abs() <= 1e-13 * mag || mag == 0.0 {
        return Err(GeomError::InfinitePoint);
    }
    Ok((tri.a * w[0] + tri.b * w[1] + tri.c * w[2]) / sum)
}

/// Triangle centers handled by [`kimberling`].
pub const SUPPORTED_CENTERS: [u32; 22] =
    [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 13, 14, 15, 16, 20, 65, 77, 80, 105, 170, 175, 176];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct CenterId(u32);

impl CenterId {
    pub fn new(k: u32) -> Result<Self, PorismError> {
        if SUPPORTED_CENTERS.contains(&k) {
            Ok(Self(k))
        } else {
            Err(PorismError::UnsupportedCenter(k))
        }
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = CenterId> {
        SUPPORTED_CENTERS.iter().map(|&k| CenterId(k))
    }
}

impl TryFrom<u32> for CenterId {
    type Error = PorismError;
    fn try_from(k: u32) -> Result<Self, Self::Error> {
        Self::new(k)
    }
}

impl From<CenterId> for u32 {
    fn from(id: CenterId) -> u32 {
        id.0
    }
}

impl std::fmt::Display for CenterId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "X{}", self.0)
    }
}

/// Trilinear coordinates of center `k`. Expressions with poles (secants,
/// cosecants, reciprocals) are multiplied through by the cyclic product so
/// that the triple stays finite.
pub fn trilinear(s: &TriangleShape, k: u32) -> Option<[f64; 3]> {
    let (a, b, c) = (s.la, s.lb, s.lc);
    let (ca, cb, cc) = (s.angle_a.cos(), s.angle_b.cos(), s.angle_c.cos());
    let ang = [s.angle_a, s.angle_b, s.angle_c];
    let cyc = |f: &dyn Fn(f64, f64, f64, f64, f64, f64) -> f64| {
        [
            f(a, b, c, s.angle_a, s.angle_b, s.angle_c),
            f(b, c, a, s.angle_b, s.angle_c, s.angle_a),
            f(c, a, b, s.angle_c, s.angle_a, s.angle_b),
        ]
    };
    // t_i = 1 / g_i  ->  t_i = g_j g_k
    let recip = |g: [f64; 3]| [g[1] * g[2], g[2] * g[0], g[0] * g[1]];
    Some(match k {
        1 => [1.0, 1.0, 1.0],
        2 => [1.0 / a, 1.0 / b, 1.0 / c],
        3 => [ca, cb, cc],
        4 => recip([ca, cb, cc]),
        5 => cyc(&|_, _, _, _, bb, cc| (bb - cc).cos()),
        6 => [a, b, c],
        7 => recip(cyc(&|a, b, c, _, _, _| a * (b + c - a))),
        8 => cyc(&|a, b, c, _, _, _| (b + c - a) / a),
        9 => cyc(&|a, b, c, _, _, _| b + c - a),
        10 => cyc(&|a, b, c, _, _, _| (b + c) / a),
        13 => recip(ang.map(|x| (x + FRAC_PI_3).sin())),
        14 => recip(ang.map(|x| (x - FRAC_PI_3).sin())),
        15 => ang.map(|x| (x + FRAC_PI_3).sin()),
        16 => ang.map(|x| (x - FRAC_PI_3).sin()),
        20 => [ca - cb * cc, cb - cc * ca, cc - ca * cb],
        65 => [cb + cc, cc + ca, ca + cb],
        77 => [ca, cb, cc].map(|x| x / (1.0 + x)),
        80 => recip([ca, cb, cc].map(|x| 1.0 - 2.0 * x)),
        105 => recip(cyc(&|a, b, c, _, _, _| b * b + c * c - a * b - a * c)),
        170 => cyc(&|a, b, c, _, _, _| (a * a - 2.0 * a * (b + c) + b * b + c * c) / (b + c - a).powi(2)),
        175 | 176 => {
            let sign = if k == 176 { 1.0 } else { -1.0 };
            let h = ang.map(|x| (0.5 * x).cos());
            [sign + h[1] * h[2] / h[0], sign + h[2] * h[0] / h[1], sign + h[0] * h[1] / h[2]]
        }
        _ => return None,
    })
}

/// Soddy circles of the three mutually tangent circles centered at the
/// vertices with radii `s - a`, `s - b`, `s - c`.
///
/// Curvatures are signed (negative for a circle enclosing the other three);
/// the outer circle is `None` when it degenerates to a line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoddyCircles {
    pub inner: Circle,
    pub inner_curvature: f64,
    pub outer: Option<Circle>,
    pub outer_curvature: f64,
}

pub fn soddy_circles(tri: &Triangle) -> SoddyCircles {
    let s = tri.shape();
    let semi = 0.5 * (s.la + s.lb + s.lc);
    let r = [semi - s.la, semi - s.lb, semi - s.lc];
    let k = r.map(|x| 1.0 / x);
    let z = tri.vertices();
    let ksum = k[0] + k[1] + k[2];
    let root = (k[0] * k[1] + k[1] * k[2] + k[2] * k[0]).sqrt();
    let solve = |k4: f64| -> Point {
        // complex Descartes: z4 k4 = sum z_i k_i +- 2 sqrt(sum k_i k_j z_i z_j)
        let mul = |p: Point, q: Point| Point::new(p.x * q.x - p.y * q.y, p.x * q.y + p.y * q.x);
        let lin = z[0] * k[0] + z[1] * k[1] + z[2] * k[2];
        let quad = mul(z[0], z[1]) * (k[0] * k[1]) + mul(z[1], z[2]) * (k[1] * k[2]) + mul(z[2], z[0]) * (k[2] * k[0]);
        let m = quad.norm().sqrt();
        let half = 0.5 * quad.y.atan2(quad.x);
        let sq = Point::polar(m, half);
        let defect = |p: Point| (0..3).map(|i| (p.distance(z[i]) - (r[i] + 1.0 / k4).abs()).abs()).fold(0.0, f64::max);
        let (p1, p2) = ((lin + sq * 2.0) / k4, (lin - sq * 2.0) / k4);
        if defect(p1) <= defect(p2) {
            p1
        } else {
            p2
        }
    };
    let k_in = ksum + 2.0 * root;
    let k_out = ksum - 2.0 * root;
    let outer = (k_out.abs() > 1e-12 * ksum).then(|| Circle::new(solve(k_out), 1.0 / k_out.abs()));
    SoddyCircles { inner: Circle::new(solve(k_in), 1.0 / k_in), inner_curvature: k_in, outer, outer_curvature: k_out }
}

/// Kimberling center `X_k` of `tri`.
///
/// `X175` and `X176` are also built as the outer and inner Soddy centers and
/// the two constructions must agree.
pub fn kimberling(tri: &Triangle, id: CenterId) -> Result<Point, PorismError> {
    let k = id.index();
    if tri.is_equilateral() {
        return match k {
            // 0:0:0 at the equilateral triangle; the limit depends on the approach
            14 | 16 | 80 | 105 => Err(PorismError::CenterUndefined(k)),
            _ => Ok((tri.a + tri.b + tri.c) / 3.0),
        };
    }
    let s = tri.shape();
    let t = trilinear(&s, k).ok_or(PorismError::UnsupportedCenter(k))?;
    let p = center_from_trilinear(tri, t).map_err(|_| PorismError::CenterUndefined(k))?;
    if k == 175 || k == 176 {
        let soddy = soddy_circles(tri);
        let q = if k == 176 { Some(soddy.inner.center) } else { soddy.outer.map(|c| c.center) };
        let q = q.ok_or(PorismError::CenterUndefined(k))?;
        let scale = p.norm().max(tri.semiperimeter());
        if p.distance(q) > 1e-6 * scale {
            return Err(PorismError::InvalidConfig(format!(
                "X{k}: trilinear and Soddy constructions differ by {:e}",
                p.distance(q)
            )));
        }
    }
    Ok(p)
}

/// Contact points of the incircle with sides `bc`, `ca`, `ab`, in that order.
pub fn intouch_triangle(tri: &Triangle) -> Triangle {
    let s = tri.shape();
    let semi = 0.5 * (s.la + s.lb + s.lc);
    let d = tri.b + (tri.c - tri.b) * ((semi - s.lb) / s.la);
    let e = tri.c + (tri.a - tri.c) * ((semi - s.lc) / s.lb);
    let f = tri.a + (tri.b - tri.a) * ((semi - s.la) / s.lc);
    Triangle { a: d, b: e, c: f }
}

pub fn is_acute(tri: &Triangle) -> bool {
    let s = tri.shape();
    let (a2, b2, c2) = (s.la * s.la, s.lb * s.lb, s.lc * s.lc);
    a2 + b2 > c2 && b2 + c2 > a2 && c2 + a2 > b2
}

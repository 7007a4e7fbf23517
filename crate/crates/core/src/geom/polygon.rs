use super::{Line, Point};
use crate::error::GeomError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// At least three vertices, consecutive ones separated by more than `tol`.
    pub fn new(vertices: Vec<Point>, tol: f64) -> Result<Self, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::DegeneratePolygon("fewer than three vertices"));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::DegeneratePolygon("non-finite vertex"));
        }
        let n = vertices.len();
        if (0..n).any(|i| vertices[i].distance(vertices[(i + 1) % n]) <= tol) {
            return Err(GeomError::DegeneratePolygon("coincident consecutive vertices"));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.len()]
    }

    /// Side `i` joins vertex `i` to vertex `i + 1`.
    pub fn side(&self, i: usize) -> (Point, Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn side_line(&self, i: usize) -> Line {
        let (p, q) = self.side(i);
        Line::through(p, q)
    }

    pub fn side_lines(&self) -> Vec<Line> {
        (0..self.len()).map(|i| self.side_line(i)).collect()
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let (p, q) = self.side(i);
                p.distance(q)
            })
            .sum()
    }

    /// Shoelace signed area, positive for counterclockwise order.
    pub fn signed_area(&self) -> f64 {
        0.5 * (0..self.len())
            .map(|i| {
                let (p, q) = self.side(i);
                p.cross(q)
            })
            .sum::<f64>()
    }

    /// Unsigned angle between the two sides meeting at vertex `i`, in `[0, pi]`.
    pub fn vertex_angle(&self, i: usize) -> f64 {
        let p = self.vertex(i);
        let u = self.vertex(i + self.len() - 1) - p;
        let v = self.vertex(i + 1) - p;
        u.cross(v).abs().atan2(u.dot(v))
    }

    /// Winding number of the closed vertex path around `p`.
    pub fn winding_number(&self, p: Point) -> i32 {
        let mut w = 0;
        for i in 0..self.len() {
            let (a, b) = self.side(i);
            let side = (b - a).cross(p - a);
            if a.y <= p.y {
                if b.y > p.y && side > 0.0 {
                    w += 1;
                }
            } else if b.y <= p.y && side < 0.0 {
                w -= 1;
            }
        }
        w
    }

    /// Distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.side(i);
                let d = b - a;
                let t = ((p - a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
                p.distance(a + d * t)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Winding-number containment; points within `tol` of the boundary count as inside.
pub fn point_in_polygon(p: Point, poly: &Polygon, tol: f64) -> bool {
    poly.boundary_distance(p) <= tol || poly.winding_number(p) != 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        let v = vec![Point::new(-0.5, -0.5), Point::new(0.5, -0.5), Point::new(0.5, 0.5), Point::new(-0.5, 0.5)];
        Polygon::new(v, 1e-12).unwrap()
    }

    #[test]
    fn containment() {
        let sq = square();
        assert!(point_in_polygon(Point::ORIGIN, &sq, 1e-12));
        assert!(!point_in_polygon(Point::new(10.0, 10.0), &sq, 1e-12));
        assert!(point_in_polygon(Point::new(0.5, 0.1), &sq, 1e-12));
        let rev = Polygon::new(sq.vertices().iter().rev().copied().collect(), 1e-12).unwrap();
        assert!(point_in_polygon(Point::new(0.2, 0.3), &rev, 1e-12));
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(Polygon::new(vec![Point::ORIGIN, Point::new(1.0, 0.0)], 1e-12).is_err());
        let dup = vec![Point::ORIGIN, Point::ORIGIN, Point::new(1.0, 1.0)];
        assert!(Polygon::new(dup, 1e-12).is_err());
    }

    #[test]
    fn square_measures() {
        let sq = square();
        assert!((sq.signed_area() - 1.0).abs() < 1e-15);
        assert!((sq.perimeter() - 4.0).abs() < 1e-15);
        for i in 0..4 {
            assert!((sq.vertex_angle(i) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        }
    }
}

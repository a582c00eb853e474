//! Plane primitives and the tolerance policy shared by every check.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn from_polar(radius: f64, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(radius * c, radius * s)
    }

    /// Rotate counterclockwise by `angle` about `center`.
    pub fn rotate_about(self, center: Point2, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        let d = self - center;
        center + Point2::new(c * d.x - s * d.y, s * d.x + c * d.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2::new(x, y)
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() {
            return Err(Error::NonFinite);
        }
        if radius <= 0.0 {
            return Err(Error::DegenerateInput(format!(
                "circle radius must be positive, got {radius}"
            )));
        }
        Ok(Circle { center, radius })
    }
}

/// Scale-aware equality tolerance.
///
/// For a point set of diameter `D` the effective tolerance is
/// `max(rel * D, abs_floor)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs_floor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs_floor: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs_floor: f64) -> Result<Self> {
        if !(rel.is_finite() && rel > 0.0) || !(abs_floor.is_finite() && abs_floor >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance needs rel > 0 and abs_floor >= 0, got rel={rel}, abs_floor={abs_floor}"
            )));
        }
        Ok(Tolerance { rel, abs_floor })
    }

    pub fn effective(&self, diameter: f64) -> f64 {
        (self.rel * diameter).max(self.abs_floor)
    }

    /// Effective tolerance for the point set `points`.
    pub fn for_points(&self, points: &[Point2]) -> f64 {
        self.effective(diameter(points))
    }

    /// True when `a` and `b` are indistinguishable at the scale of their coordinates.
    pub fn coincident(&self, a: Point2, b: Point2) -> bool {
        let scale = a.norm().max(b.norm());
        a.distance(b) <= self.effective(scale)
    }
}

/// Largest pairwise distance in `points` (0 for fewer than two points).
pub fn diameter(points: &[Point2]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(p.distance(*q));
        }
    }
    best
}

fn ensure_finite(points: &[Point2]) -> Result<()> {
    if points.iter().all(|p| p.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Incircle of triangle `abc`: the incenter is the vertex average weighted by
/// opposite side lengths, the radius is area over semiperimeter.
pub fn incircle_of_triangle(a: Point2, b: Point2, c: Point2) -> Result<Circle> {
    ensure_finite(&[a, b, c])?;
    let la = b.distance(c);
    let lb = c.distance(a);
    let lc = a.distance(b);
    let perimeter = la + lb + lc;
    let area = 0.5 * (b - a).cross(c - a).abs();
    let d = la.max(lb).max(lc);
    // area <= tol * D is the same as a height below tol
    if area <= Tolerance::default().effective(d) * d {
        return Err(Error::DegenerateInput(format!(
            "triangle area {area:e} is below tolerance"
        )));
    }
    let center = (a * la + b * lb + c * lc) * (1.0 / perimeter);
    Circle::new(center, area / (0.5 * perimeter))
}

/// Orthogonal projection of `p` onto the line through `line_a` and `line_b`.
pub fn foot_of_perpendicular(p: Point2, line_a: Point2, line_b: Point2) -> Result<Point2> {
    ensure_finite(&[p, line_a, line_b])?;
    if Tolerance::default().coincident(line_a, line_b) {
        return Err(Error::DegenerateInput(
            "line endpoints coincide".to_string(),
        ));
    }
    let dir = line_b - line_a;
    let s = (p - line_a).dot(dir) / dir.dot(dir);
    Ok(line_a + dir * s)
}

/// The point at signed `distance` from `origin` on the line through `through`
/// and `origin`, continuing past `origin` away from `through`.
///
/// Negative distances land on the `through` side of `origin`.
pub fn point_on_ray(origin: Point2, through: Point2, distance: f64) -> Result<Point2> {
    ensure_finite(&[origin, through])?;
    if !distance.is_finite() {
        return Err(Error::NonFinite);
    }
    if Tolerance::default().coincident(origin, through) {
        return Err(Error::DegenerateInput(
            "ray origin and through point coincide".to_string(),
        ));
    }
    let dir = origin - through;
    Ok(origin + dir * (distance / dir.norm()))
}

/// Circumcircle of `p`, `q`, `r`.
pub fn circle_through_three_points(p: Point2, q: Point2, r: Point2) -> Result<Circle> {
    ensure_finite(&[p, q, r])?;
    let b = q - p;
    let c = r - p;
    let d = 2.0 * b.cross(c);
    let scale = diameter(&[p, q, r]);
    // |d| is twice the parallelogram area; compare its height to the tolerance
    if scale == 0.0 || d.abs() <= 2.0 * Tolerance::default().effective(scale) * scale {
        return Err(Error::DegenerateInput("points are collinear".to_string()));
    }
    let b2 = b.dot(b);
    let c2 = c.dot(c);
    let offset = Point2::new(c.y * b2 - b.y * c2, b.x * c2 - c.x * b2) * (1.0 / d);
    Circle::new(p + offset, offset.norm())
}

/// Twice the signed area of a closed polygon (positive when counterclockwise).
pub fn signed_area2(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum()
}

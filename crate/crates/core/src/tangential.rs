//! Tangential polygons: every side line touches one inscribed circle.
//!
//! Indices are stored 0-based. Side `i` joins `vertices[i]` to
//! `vertices[(i + 1) % n]` and touches the incircle at `tangency_points[i]`;
//! `tangent_lengths[i]` is the common distance from `vertices[i]` to the two
//! tangency points on its incident sides. Documentation and I/O use 1-based
//! labels `V_1 … V_n`, `λ_1 … λ_n`.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, Circle, Point2, Tolerance};
use crate::root::bisect_decreasing;
use crate::verify::CheckReport;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentialPolygon {
    vertices: Vec<Point2>,
    incenter: Point2,
    inradius: f64,
    side_lengths: Vec<f64>,
    tangency_points: Vec<Point2>,
    tangent_lengths: Vec<f64>,
}

impl TangentialPolygon {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn incenter(&self) -> Point2 {
        self.incenter
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn incircle(&self) -> Circle {
        Circle {
            center: self.incenter,
            radius: self.inradius,
        }
    }

    pub fn side_lengths(&self) -> &[f64] {
        &self.side_lengths
    }

    pub fn tangency_points(&self) -> &[Point2] {
        &self.tangency_points
    }

    pub fn tangent_lengths(&self) -> &[f64] {
        &self.tangent_lengths
    }

    pub fn perimeter(&self) -> f64 {
        self.side_lengths.iter().sum()
    }

    pub fn semiperimeter(&self) -> f64 {
        0.5 * self.perimeter()
    }

    pub fn diameter(&self) -> f64 {
        geom::diameter(&self.vertices)
    }

    /// Strictly convex and counterclockwise. Only polygons from
    /// [`relaxed_polygon_from_sides`] can fail this.
    pub fn is_convex(&self) -> bool {
        strict_turns(&self.vertices).is_ok_and(|turning| (turning - TAU).abs() < 1e-6)
    }

    /// For even polygons, the free parameter `h0`: the tangent length at `V_1`.
    pub fn h0(&self) -> Option<f64> {
        self.n().is_multiple_of(2).then(|| self.tangent_lengths[0])
    }

    /// Applies the rigid motion `p ↦ rotate(p, angle) + shift` to every point.
    pub fn rigid_motion(&self, angle: f64, shift: Point2) -> TangentialPolygon {
        let map = |p: Point2| p.rotate_about(Point2::ORIGIN, angle) + shift;
        TangentialPolygon {
            vertices: self.vertices.iter().copied().map(map).collect(),
            incenter: map(self.incenter),
            inradius: self.inradius,
            side_lengths: self.side_lengths.clone(),
            tangency_points: self.tangency_points.iter().copied().map(map).collect(),
            tangent_lengths: self.tangent_lengths.clone(),
        }
    }

    /// Measures every structural invariant from coordinates.
    ///
    /// Residuals are lengths: side-line distance versus inradius,
    /// `t_i + t_{i+1} − λ_i`, tangency feet versus stored tangency points,
    /// and the closure defect `|Σ 2·atan(t_i/r) − 2π|` scaled by `r`.
    /// Convexity and the smallest tangent length are reported as details only.
    pub fn check_invariants(&self, tol: &Tolerance) -> CheckReport {
        let n = self.n();
        let mut line_dev = 0.0f64;
        let mut foot_dev = 0.0f64;
        let mut sum_dev = 0.0f64;
        let mut tangent_dev = 0.0f64;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let dist = (b - a).cross(self.incenter - a).abs() / a.distance(b);
            line_dev = line_dev.max((dist - self.inradius).abs());
            if let Ok(foot) = geom::foot_of_perpendicular(self.incenter, a, b) {
                foot_dev = foot_dev.max(foot.distance(self.tangency_points[i]));
            }
            let t_next = self.tangent_lengths[(i + 1) % n];
            sum_dev = sum_dev.max((self.tangent_lengths[i] + t_next - self.side_lengths[i]).abs());
            sum_dev = sum_dev.max((a.distance(b) - self.side_lengths[i]).abs());
            tangent_dev = tangent_dev
                .max((a.distance(self.tangency_points[i]) - self.tangent_lengths[i].abs()).abs());
            let prev = self.tangency_points[(i + n - 1) % n];
            tangent_dev = tangent_dev.max((a.distance(prev) - self.tangent_lengths[i].abs()).abs());
        }
        let closure = closure_defect(&self.tangent_lengths, self.inradius) * self.inradius;
        let min_tangent = self
            .tangent_lengths
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let convex = self.is_convex();
        let max_residual = line_dev
            .max(foot_dev)
            .max(sum_dev)
            .max(tangent_dev)
            .max(closure);
        let tolerance = tol.effective(self.diameter());
        CheckReport::from_residual(max_residual, tolerance)
            .with("side_line_distance", line_dev)
            .with("tangency_foot", foot_dev)
            .with("tangent_sum", sum_dev)
            .with("tangent_length", tangent_dev)
            .with("closure", closure)
            .with("min_tangent_length", min_tangent)
            .with("convex", if convex { 1.0 } else { 0.0 })
    }
}

/// Side-length data for synthesizing a tangential polygon.
///
/// `h0` is the tangent length at `V_1` and is required exactly when the
/// polygon has an even number of sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideLengthSpec {
    pub lengths: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
}

impl SideLengthSpec {
    pub fn odd(lengths: Vec<f64>) -> Self {
        SideLengthSpec { lengths, h0: None }
    }

    pub fn even(lengths: Vec<f64>, h0: f64) -> Self {
        SideLengthSpec {
            lengths,
            h0: Some(h0),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lengths.len() < 3 {
            return Err(Error::WrongArity(format!(
                "a polygon needs at least 3 sides, got {}",
                self.lengths.len()
            )));
        }
        if self.lengths.iter().any(|l| !l.is_finite()) || self.h0.is_some_and(|h| !h.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(i) = self.lengths.iter().position(|&l| l <= 0.0) {
            return Err(Error::DegenerateInput(format!(
                "side length λ_{} = {} is not positive",
                i + 1,
                self.lengths[i]
            )));
        }
        if self.lengths.len() % 2 == 1 && self.h0.is_some() {
            return Err(Error::InvalidConfig(
                "h0 only applies to polygons with an even number of sides".to_string(),
            ));
        }
        Ok(())
    }
}

/// `Σ (−1)^i λ_i` over 0-based `i`; zero is required for an even cycle.
fn alternating_sum(lengths: &[f64]) -> f64 {
    lengths
        .iter()
        .enumerate()
        .map(|(i, l)| if i % 2 == 0 { *l } else { -l })
        .sum()
}

/// Solves `t_i + t_{i+1} = λ_i` without any sign requirement.
fn solve_tangent_system(spec: &SideLengthSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let lengths = &spec.lengths;
    let n = lengths.len();
    if n % 2 == 1 {
        return Ok((0..n)
            .map(|i| {
                0.5 * (0..n)
                    .map(|j| {
                        let l = lengths[(i + j) % n];
                        if j % 2 == 0 {
                            l
                        } else {
                            -l
                        }
                    })
                    .sum::<f64>()
            })
            .collect());
    }
    let h0 = spec.h0.ok_or(Error::MissingParameter("h0"))?;
    let alt = alternating_sum(lengths);
    let perimeter: f64 = lengths.iter().sum();
    if alt.abs() > Tolerance::default().effective(perimeter) {
        return Err(Error::Unsolvable {
            alternating_sum: alt,
        });
    }
    let mut t = Vec::with_capacity(n);
    t.push(h0);
    for i in 0..n - 1 {
        t.push(lengths[i] - t[i]);
    }
    Ok(t)
}

/// Tangent lengths `t_1 … t_n` with `t_i + t_{i+1} = λ_i`.
///
/// Odd polygons have the unique solution `t_i = ½ Σ_j (−1)^j λ_{i+j}`; even
/// polygons need the alternating side sum to vanish and take `t_1 = h0`.
pub fn tangent_lengths_from_sides(spec: &SideLengthSpec) -> Result<Vec<f64>> {
    let t = solve_tangent_system(spec)?;
    if let Some(i) = t.iter().position(|&v| v <= 0.0) {
        return Err(Error::Infeasible {
            index: i + 1,
            value: t[i],
        });
    }
    Ok(t)
}

/// Open interval of `h0` values giving positive tangent lengths for an even
/// side sequence. Fails with `Infeasible` when the interval is empty.
pub fn admissible_h0_range(lengths: &[f64]) -> Result<(f64, f64)> {
    // t_k = (−1)^k h0 + c_k (0-based k), with c_k the alternating prefix sum
    let probe = SideLengthSpec::even(lengths.to_vec(), 0.0);
    if lengths.len() % 2 == 1 {
        return Err(Error::WrongArity(
            "h0 only applies to polygons with an even number of sides".to_string(),
        ));
    }
    let offsets = solve_tangent_system(&probe)?;
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for (k, c) in offsets.iter().enumerate() {
        if k % 2 == 0 {
            lo = lo.max(-c);
        } else {
            hi = hi.min(*c);
        }
    }
    if lo >= hi {
        let k = offsets
            .iter()
            .enumerate()
            .skip(1)
            .step_by(2)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(k, _)| k);
        return Err(Error::Infeasible {
            index: k + 1,
            value: hi - lo,
        });
    }
    Ok((lo, hi))
}

/// `|Σ 2·atan(t_i / r) − 2π|`.
pub fn closure_defect(t: &[f64], r: f64) -> f64 {
    (t.iter().map(|ti| 2.0 * (ti / r).atan()).sum::<f64>() - TAU).abs()
}

fn check_tangents(t: &[f64]) -> Result<()> {
    if t.len() < 3 {
        return Err(Error::WrongArity(format!(
            "a polygon needs at least 3 tangent lengths, got {}",
            t.len()
        )));
    }
    if t.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Bracket `[lo, hi]` for `Σ atan(t_i/r) = π` and bisect it.
///
/// `hi = Σ|t_i|` keeps the angle sum below 1; `lo` halves from `min |t_i|`
/// until the sum exceeds π.
fn solve_closure(t: &[f64]) -> Option<f64> {
    let f = |r: f64| t.iter().map(|ti| (ti / r).atan()).sum::<f64>() - PI;
    let hi: f64 = t.iter().map(|v| v.abs()).sum();
    let mut lo = t.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let mut steps = 0;
    while f(lo) <= 0.0 {
        lo *= 0.5;
        steps += 1;
        if steps > 2000 || lo == 0.0 {
            return None;
        }
    }
    Some(bisect_decreasing(f, lo, hi))
}

/// The unique `r > 0` with `Σ 2·atan(t_i / r) = 2π`.
///
/// The left side falls monotonically from `nπ` to 0 as `r` grows, so a
/// bracketed bisection always converges.
pub fn inradius_from_tangent_lengths(t: &[f64]) -> Result<f64> {
    check_tangents(t)?;
    if let Some(i) = t.iter().position(|&v| v <= 0.0) {
        return Err(Error::Infeasible {
            index: i + 1,
            value: t[i],
        });
    }
    solve_closure(t).ok_or_else(|| Error::DegenerateInput("closure root not bracketed".into()))
}

/// Lays out tangency points at cumulative angles starting on the +x axis.
///
/// Stored side lengths are `sides` when given, else `t_i + t_{i+1}`.
fn assemble(t: &[f64], r: f64, sides: Option<&[f64]>) -> TangentialPolygon {
    let n = t.len();
    let mut theta = 0.0f64;
    let mut tangency_points = Vec::with_capacity(n);
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let touch = Point2::from_polar(r, theta);
        let along = Point2::new(-theta.sin(), theta.cos());
        tangency_points.push(touch);
        vertices.push(touch - along * t[i]);
        theta += 2.0 * (t[(i + 1) % n] / r).atan();
    }
    let side_lengths = match sides {
        Some(s) => s.to_vec(),
        None => (0..n).map(|i| t[i] + t[(i + 1) % n]).collect(),
    };
    TangentialPolygon {
        vertices,
        incenter: Point2::ORIGIN,
        inradius: r,
        side_lengths,
        tangency_points,
        tangent_lengths: t.to_vec(),
    }
}

/// Realizes tangent lengths `t` around an incircle of radius `r` at the origin.
pub fn build_polygon(t: &[f64], r: f64) -> Result<TangentialPolygon> {
    check_tangents(t)?;
    if let Some(i) = t.iter().position(|&v| v <= 0.0) {
        return Err(Error::Infeasible {
            index: i + 1,
            value: t[i],
        });
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::DegenerateInput(format!(
            "inradius must be positive, got {r}"
        )));
    }
    let defect = closure_defect(t, r);
    if defect > Tolerance::default().rel * TAU {
        return Err(Error::ClosureViolated {
            angle_sum: TAU + defect,
        });
    }
    Ok(assemble(t, r, None))
}

/// Tangential polygon with the given side lengths (and `h0` when even).
pub fn polygon_from_sides(spec: &SideLengthSpec) -> Result<TangentialPolygon> {
    let t = tangent_lengths_from_sides(spec)?;
    let r = inradius_from_tangent_lengths(&t)?;
    build_polygon(&t, r)?;
    Ok(assemble(&t, r, Some(&spec.lengths)))
}

/// Like [`polygon_from_sides`] but admits negative tangent lengths.
///
/// Each side line still touches the circle and consecutive vertices are
/// still `λ_i` apart, but a vertex with `t_i < 0` turns the wrong way, so
/// the result is non-convex and the tangency points fall outside some
/// sides. Side sequences such as `(1, 2, 3, 4, 5)` have no convex
/// tangential realization and need this form.
pub fn relaxed_polygon_from_sides(spec: &SideLengthSpec) -> Result<TangentialPolygon> {
    let t = solve_tangent_system(spec)?;
    if let Some(i) = t.iter().position(|&v| v == 0.0) {
        return Err(Error::Infeasible {
            index: i + 1,
            value: 0.0,
        });
    }
    let positive = t.iter().filter(|v| **v > 0.0).count();
    // the angle sum tends to (P − N)·π/2 as r → 0 and must start above π
    if 2 * positive < t.len() + 3 {
        let i = t.iter().position(|&v| v < 0.0).unwrap_or(0);
        return Err(Error::Infeasible {
            index: i + 1,
            value: t[i],
        });
    }
    let r = solve_closure(&t)
        .ok_or_else(|| Error::DegenerateInput("closure root not bracketed".into()))?;
    Ok(assemble(&t, r, Some(&spec.lengths)))
}

/// Sum of signed exterior angles, failing unless every turn is strictly left.
fn strict_turns(vertices: &[Point2]) -> Result<f64> {
    let n = vertices.len();
    let mut turning = 0.0;
    for i in 0..n {
        let e0 = vertices[i] - vertices[(i + n - 1) % n];
        let e1 = vertices[(i + 1) % n] - vertices[i];
        let scale = e0.norm() * e1.norm();
        let cross = e0.cross(e1);
        if scale == 0.0 || cross <= Tolerance::default().rel * scale {
            return Err(Error::NotConvex);
        }
        turning += cross.atan2(e0.dot(e1));
    }
    Ok(turning)
}

/// Returns a counterclockwise copy of a strictly convex polygon.
/// Clockwise input is reversed with `V_1` kept first.
fn normalize_convex(vertices: &[Point2]) -> Result<Vec<Point2>> {
    if vertices.len() < 3 {
        return Err(Error::WrongArity(format!(
            "a polygon needs at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    if vertices.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut ccw = vertices.to_vec();
    if geom::signed_area2(vertices) < 0.0 {
        ccw[1..].reverse();
    }
    let turning = strict_turns(&ccw)?;
    if (turning - TAU).abs() > 1e-6 {
        return Err(Error::NotConvex);
    }
    Ok(ccw)
}

/// Fills in tangency points and tangent lengths for a convex CCW polygon
/// whose sides touch the given circle.
fn with_incircle(
    vertices: Vec<Point2>,
    incenter: Point2,
    inradius: f64,
) -> Result<TangentialPolygon> {
    let n = vertices.len();
    let tangency_points = (0..n)
        .map(|i| geom::foot_of_perpendicular(incenter, vertices[i], vertices[(i + 1) % n]))
        .collect::<Result<Vec<_>>>()?;
    let tangent_lengths = (0..n)
        .map(|i| {
            let v = vertices[i];
            0.5 * (v.distance(tangency_points[i]) + v.distance(tangency_points[(i + n - 1) % n]))
        })
        .collect();
    let side_lengths = (0..n)
        .map(|i| vertices[i].distance(vertices[(i + 1) % n]))
        .collect();
    Ok(TangentialPolygon {
        vertices,
        incenter,
        inradius,
        side_lengths,
        tangency_points,
        tangent_lengths,
    })
}

/// Tangential polygon whose sides are parallel to the sides of `convex`
/// (same outward normals) and tangent to `circle`.
pub fn parallel_tangential_polygon(
    convex: &[Point2],
    circle: &Circle,
) -> Result<TangentialPolygon> {
    let ccw = normalize_convex(convex)?;
    let n = ccw.len();
    let lines: Vec<(Point2, f64)> = (0..n)
        .map(|i| {
            let d = ccw[(i + 1) % n] - ccw[i];
            let normal = Point2::new(d.y, -d.x) * (1.0 / d.norm());
            (normal, normal.dot(circle.center) + circle.radius)
        })
        .collect();
    let vertices = (0..n)
        .map(|i| {
            let (n0, k0) = lines[(i + n - 1) % n];
            let (n1, k1) = lines[i];
            let det = n0.cross(n1);
            if det.abs() <= Tolerance::default().rel {
                return Err(Error::DegenerateInput(format!(
                    "sides {} and {} are parallel",
                    (i + n - 1) % n + 1,
                    i + 1
                )));
            }
            Ok(Point2::new(k0 * n1.y - k1 * n0.y, n0.x * k1 - n1.x * k0) * (1.0 / det))
        })
        .collect::<Result<Vec<_>>>()?;
    with_incircle(vertices, circle.center, circle.radius)
}

/// Recovers the incircle of a user-supplied convex polygon.
///
/// The center and radius are the least-squares solution of
/// `ν_i · (p − V_i) = r` over all inward side normals `ν_i`; the polygon is
/// accepted when every side-line distance agrees within tolerance.
pub fn validate_tangential(vertices: &[Point2]) -> Result<TangentialPolygon> {
    let ccw = normalize_convex(vertices)?;
    let n = ccw.len();
    let normals: Vec<Point2> = (0..n)
        .map(|i| {
            let d = ccw[(i + 1) % n] - ccw[i];
            d.perp() * (1.0 / d.norm())
        })
        .collect();
    let a = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => normals[i].x,
        1 => normals[i].y,
        _ => -1.0,
    });
    let b = DVector::from_fn(n, |i, _| normals[i].dot(ccw[i]));
    let solution = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::DegenerateInput(e.to_string()))?;
    let center = Point2::new(solution[0], solution[1]);
    let distances: Vec<f64> = (0..n).map(|i| normals[i].dot(center - ccw[i])).collect();
    let max = distances.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = distances.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = max - min;
    if spread > Tolerance::default().for_points(&ccw) || min <= 0.0 {
        return Err(Error::NotTangential { spread });
    }
    let radius = distances.iter().sum::<f64>() / n as f64;
    with_incircle(ccw, center, radius)
}

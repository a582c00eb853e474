//! Conway circles: side extensions whose endpoints share a circle about the
//! incenter.
//!
//! An endpoint on the side through vertex `V`, pushed `x` past `V`, sits at
//! distance `√(r² + (t_V + x)²)` from the incenter, where `t_V` is the tangent
//! length at `V`. Every family below picks extensions that make `t_V + x` the
//! same at all `2n` side ends.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, Circle, Point2, Tolerance};
use crate::tangential::{self, SideLengthSpec, TangentialPolygon};
use crate::verify::{self, CheckReport};

/// Which end of a side an extension leaves from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    /// Beyond `V_i` on side `i`.
    Start,
    /// Beyond `V_{i+1}` on side `i`.
    End,
}

/// Extension lengths for all `2n` side ends, laid out as
/// `(side 1, start), (side 1, end), (side 2, start), …`.
///
/// Negative lengths pull the endpoint back inside the side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtensionSpec {
    per_end: Vec<f64>,
}

impl ExtensionSpec {
    pub fn from_per_end(per_end: Vec<f64>) -> Result<Self> {
        if per_end.len() < 6 || per_end.len() % 2 == 1 {
            return Err(Error::WrongArity(format!(
                "extension spec needs 2n >= 6 entries, got {}",
                per_end.len()
            )));
        }
        if per_end.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ExtensionSpec { per_end })
    }

    /// Spec extending both sides at `V_k` by `x[k]`.
    pub fn from_vertex_values(x: &[f64]) -> Result<Self> {
        let n = x.len();
        let mut per_end = vec![0.0; 2 * n];
        for (k, &value) in x.iter().enumerate() {
            per_end[2 * k] = value;
            per_end[2 * ((k + n - 1) % n) + 1] = value;
        }
        Self::from_per_end(per_end)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_per_end(vec![0.0; 2 * n])
    }

    pub fn sides(&self) -> usize {
        self.per_end.len() / 2
    }

    pub fn per_end(&self) -> &[f64] {
        &self.per_end
    }

    /// Extension on 0-based `side` at the given end.
    pub fn get(&self, side: usize, end: End) -> f64 {
        match end {
            End::Start => self.per_end[2 * side],
            End::End => self.per_end[2 * side + 1],
        }
    }

    /// The two extensions meeting at 0-based vertex `k`: `(side k start, side k−1 end)`.
    pub fn at_vertex(&self, k: usize) -> (f64, f64) {
        let n = self.sides();
        (self.per_end[2 * k], self.per_end[2 * ((k + n - 1) % n) + 1])
    }

    /// Per-vertex values, averaging the two ends when they differ.
    pub fn vertex_values(&self) -> Vec<f64> {
        (0..self.sides())
            .map(|k| {
                let (a, b) = self.at_vertex(k);
                0.5 * (a + b)
            })
            .collect()
    }

    /// Largest difference between the two extensions sharing a vertex.
    pub fn vertex_symmetry_violation(&self) -> f64 {
        (0..self.sides())
            .map(|k| {
                let (a, b) = self.at_vertex(k);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Copy with both extensions at 0-based vertex `k` shifted by `delta`.
    pub fn perturbed_vertex(&self, k: usize, delta: f64) -> ExtensionSpec {
        let n = self.sides();
        let mut per_end = self.per_end.clone();
        per_end[2 * k] += delta;
        per_end[2 * ((k + n - 1) % n) + 1] += delta;
        ExtensionSpec { per_end }
    }

    fn check_arity(&self, poly: &TangentialPolygon) -> Result<()> {
        if self.sides() != poly.n() {
            return Err(Error::ArityMismatch {
                expected: 2 * poly.n(),
                got: self.per_end.len(),
            });
        }
        Ok(())
    }
}

/// A polygon synthesized from side data together with its extensions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Construction {
    pub polygon: TangentialPolygon,
    pub spec: ExtensionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConwayCircleResult {
    /// Centered at the incenter, through the first endpoint.
    pub circle: Circle,
    pub endpoints: Vec<Point2>,
    /// `x_start + λ_i + x_end` per side.
    pub chord_lengths: Vec<f64>,
    pub max_residual: f64,
    /// Concyclicity verdict for all endpoints about the incenter.
    pub report: CheckReport,
}

fn require_triangle(poly: &TangentialPolygon) -> Result<()> {
    if poly.n() != 3 {
        return Err(Error::WrongArity(format!(
            "expected a triangle, got {} sides",
            poly.n()
        )));
    }
    Ok(())
}

fn require_parity(poly: &TangentialPolygon, odd: bool) -> Result<()> {
    if (poly.n() % 2 == 1) != odd {
        return Err(Error::WrongArity(format!(
            "expected an {} polygon, got {} sides",
            if odd { "odd" } else { "even" },
            poly.n()
        )));
    }
    Ok(())
}

/// `(λ_A, λ_B, λ_C)`: the side opposite each vertex of a triangle
/// (`V_1V_2` is side 1, so `λ_A = λ_2`, `λ_B = λ_3`, `λ_C = λ_1`).
pub fn opposite_side_lengths(tri: &TangentialPolygon) -> Result<[f64; 3]> {
    require_triangle(tri)?;
    let s = tri.side_lengths();
    Ok([s[1], s[2], s[0]])
}

/// The classic figure: extend beyond each vertex by the opposite side.
pub fn conway_extensions_triangle(tri: &TangentialPolygon) -> Result<ExtensionSpec> {
    ExtensionSpec::from_vertex_values(&opposite_side_lengths(tri)?)
}

/// The one-parameter family through `x_A`: `x_U = x_A + λ_U − λ_A`.
pub fn theorem1_family(tri: &TangentialPolygon, x_a: f64) -> Result<ExtensionSpec> {
    let [la, lb, lc] = opposite_side_lengths(tri)?;
    ExtensionSpec::from_vertex_values(&[x_a, x_a + lb - la, x_a + lc - la])
}

/// `x_A = 0`: the circle through `A`, with `B` and `C` pushed by
/// `λ_B − λ_A` and `λ_C − λ_A`.
pub fn corollary1_extensions(tri: &TangentialPolygon) -> Result<ExtensionSpec> {
    theorem1_family(tri, 0.0)
}

/// Checks `x_U − x_V = λ_U − λ_V` for all vertex pairs (opposite-side λ).
pub fn theorem1_condition_check(
    tri: &TangentialPolygon,
    spec: &ExtensionSpec,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let lambda = opposite_side_lengths(tri)?;
    spec.check_arity(tri)?;
    let x = spec.vertex_values();
    let symmetry = spec.vertex_symmetry_violation();
    let mut report = CheckReport::default().with("vertex_symmetry", symmetry);
    let mut worst = symmetry;
    for (u, v, label) in [(0, 1, "pair_AB"), (1, 2, "pair_BC"), (2, 0, "pair_CA")] {
        let violation = ((x[u] - x[v]) - (lambda[u] - lambda[v])).abs();
        worst = worst.max(violation);
        report = report.with(label, violation);
    }
    Ok(report.finish(worst, tol.effective(tri.diameter())))
}

/// `½(λ_A − λ_B − λ_C) = −t_A`: the `x_A` at which the circle is the incircle.
pub fn incircle_coincidence_extension(tri: &TangentialPolygon) -> Result<f64> {
    let [la, lb, lc] = opposite_side_lengths(tri)?;
    Ok(0.5 * (la - lb - lc))
}

/// The other `x_A` giving the same circle: reflects `t_A + x_A` through zero.
pub fn mirror_extension(tri: &TangentialPolygon, x_a: f64) -> Result<f64> {
    Ok(2.0 * incircle_coincidence_extension(tri)? - x_a)
}

/// 1-based cyclic index: `z mod m`, except `m` in place of 0.
pub fn mu(z: i64, m: i64) -> Result<usize> {
    if z < 1 || m < 1 {
        return Err(Error::InvalidIndex(format!(
            "mu needs z >= 1 and m >= 1, got z={z}, m={m}"
        )));
    }
    let r = z % m;
    Ok(if r == 0 { m } else { r } as usize)
}

fn mu_unchecked(z: usize, m: usize) -> usize {
    mu(z as i64, m as i64).expect("1-based indices")
}

/// Odd-polygon family through `x_1`, propagated by
/// `x_{μ(i+2)} = x_i − (λ_{μ(i+1)} − λ_i)` over the cycle `1, 3, …, n, 2, …, n−1`.
pub fn theorem2_family(poly: &TangentialPolygon, x_1: f64) -> Result<ExtensionSpec> {
    require_parity(poly, true)?;
    let n = poly.n();
    // 1-based views
    let lambda = |i: usize| poly.side_lengths()[i - 1];
    let mut x = vec![0.0; n + 1];
    x[1] = x_1;
    let mut i = 1;
    for _ in 0..n - 1 {
        let next = mu_unchecked(i + 2, n);
        x[next] = x[i] - (lambda(mu_unchecked(i + 1, n)) - lambda(i));
        i = next;
    }
    debug_assert_eq!(i, n - 1);
    let closure = x[i] - (lambda(mu_unchecked(i + 1, n)) - lambda(i)) - x[1];
    debug_assert!(
        closure.abs() <= 1e-9 * poly.perimeter(),
        "odd-step recurrence failed to close: {closure}"
    );
    ExtensionSpec::from_vertex_values(&x[1..])
}

/// Checks `x_i − x_{μ(i+2)} = λ_{μ(i+1)} − λ_i` for every `i`.
pub fn theorem2_condition_check(
    poly: &TangentialPolygon,
    spec: &ExtensionSpec,
    tol: &Tolerance,
) -> Result<CheckReport> {
    require_parity(poly, true)?;
    spec.check_arity(poly)?;
    let n = poly.n();
    let lambda = |i: usize| poly.side_lengths()[i - 1];
    let values = spec.vertex_values();
    let x = |i: usize| values[i - 1];
    let symmetry = spec.vertex_symmetry_violation();
    let mut worst = symmetry;
    let mut report = CheckReport::default().with("vertex_symmetry", symmetry);
    for i in 1..=n {
        let violation = ((x(i) - x(mu_unchecked(i + 2, n)))
            - (lambda(mu_unchecked(i + 1, n)) - lambda(i)))
        .abs();
        worst = worst.max(violation);
        report = report.with(format!("eq_{i}"), violation);
    }
    Ok(report.finish(worst, tol.effective(poly.diameter())))
}

/// Sum of `values[i−1]` over `1 ≤ i < k` with parity `before` and
/// `k < i ≤ m` with the other parity.
fn parity_sum(values: &[f64], k: usize, before_odd: bool) -> f64 {
    (1..=values.len())
        .filter(|&i| {
            let odd = i % 2 == 1;
            (i < k && odd == before_odd) || (i > k && odd != before_odd)
        })
        .map(|i| values[i - 1])
        .sum()
}

/// Perimeter chords for odd polygons: at `V_k` extend by the odd sides before
/// `k` and even sides after it (parities swapped for even `k`).
pub fn corollary2_extensions(poly: &TangentialPolygon) -> Result<ExtensionSpec> {
    require_parity(poly, true)?;
    let lambda = poly.side_lengths();
    let x: Vec<f64> = (1..=poly.n())
        .map(|k| parity_sum(lambda, k, k % 2 == 1))
        .collect();
    ExtensionSpec::from_vertex_values(&x)
}

/// Vertex extensions at `A … E` for a pentagon whose sides opposite
/// `A … E` are `a … e`: `(b + e, a + c, b + d, e + c, a + d)`.
pub fn corollary3_extensions(a: f64, b: f64, c: f64, d: f64, e: f64) -> [f64; 5] {
    [b + e, a + c, b + d, e + c, a + d]
}

/// Side lengths `λ_1 … λ_5` (`AB, BC, CD, DE, EA`) of the pentagon with
/// opposite sides `a … e`.
pub fn pentagon_sides_from_opposite(a: f64, b: f64, c: f64, d: f64, e: f64) -> Vec<f64> {
    vec![d, e, a, b, c]
}

/// Tangential pentagon with opposite sides `a … e` and its perimeter-chord
/// extensions.
pub fn corollary3_pentagon(a: f64, b: f64, c: f64, d: f64, e: f64) -> Result<Construction> {
    let polygon = tangential::polygon_from_sides(&SideLengthSpec::odd(
        pentagon_sides_from_opposite(a, b, c, d, e),
    ))?;
    let spec = ExtensionSpec::from_vertex_values(&corollary3_extensions(a, b, c, d, e))?;
    Ok(Construction { polygon, spec })
}

/// As [`corollary3_pentagon`], realized with
/// [`tangential::relaxed_polygon_from_sides`] so side data without a convex
/// tangential pentagon still yields the ten points.
pub fn corollary3_pentagon_relaxed(a: f64, b: f64, c: f64, d: f64, e: f64) -> Result<Construction> {
    let polygon = tangential::relaxed_polygon_from_sides(&SideLengthSpec::odd(
        pentagon_sides_from_opposite(a, b, c, d, e),
    ))?;
    let spec = ExtensionSpec::from_vertex_values(&corollary3_extensions(a, b, c, d, e))?;
    Ok(Construction { polygon, spec })
}

/// Even-polygon extensions with `h_i = λ_i` and `h_0` the tangent length at
/// `V_1`. Odd vertices `k` take `Σ{h_i: i < k odd, i > k even} − h_0`, even
/// vertices `Σ{h_i: i < k even, i > k odd} + h_0`; both sides at a vertex get
/// the same value.
pub fn theorem3_even_extensions(poly: &TangentialPolygon) -> Result<ExtensionSpec> {
    require_parity(poly, false)?;
    let h = poly.side_lengths();
    let h0 = poly.tangent_lengths()[0];
    let x: Vec<f64> = (1..=poly.n())
        .map(|k| {
            if k % 2 == 1 {
                parity_sum(h, k, true) - h0
            } else {
                parity_sum(h, k, false) + h0
            }
        })
        .collect();
    ExtensionSpec::from_vertex_values(&x)
}

/// Vertex extensions `V_1 … V_4` for the quadrilateral with sides
/// `a = V_1V_2, b, c, d = V_4V_1` whose incircle touches `d` at distance
/// `d0` from `V_4`: `(b + d0, c + d − d0, a + d0, b + d − d0)`.
pub fn corollary4_values(a: f64, b: f64, c: f64, d: f64, d0: f64) -> [f64; 4] {
    [b + d0, c + d - d0, a + d0, b + d - d0]
}

/// Tangential quadrilateral `(a, b, c, d)` touching side `d` at distance `d0`
/// from `V_4`, and its eight-point extensions. `h_0 = d − d0`.
pub fn corollary4_quadrilateral(a: f64, b: f64, c: f64, d: f64, d0: f64) -> Result<Construction> {
    let sides = [a, b, c, d];
    if sides.iter().chain([&d0]).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let perimeter = a + b + c + d;
    if ((a + c) - (b + d)).abs() > Tolerance::default().effective(perimeter) {
        return Err(Error::PitotViolated {
            ac: a + c,
            bd: b + d,
        });
    }
    let polygon = tangential::polygon_from_sides(&SideLengthSpec::even(sides.to_vec(), d - d0))?;
    let spec = theorem3_even_extensions(&polygon)?;
    Ok(Construction { polygon, spec })
}

/// Endpoints in spec order: `(side i, start)` is pushed past `V_i`,
/// `(side i, end)` past `V_{i+1}`.
pub fn apply_extensions(poly: &TangentialPolygon, spec: &ExtensionSpec) -> Result<Vec<Point2>> {
    spec.check_arity(poly)?;
    let v = poly.vertices();
    let n = poly.n();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        out.push(geom::point_on_ray(a, b, spec.get(i, End::Start))?);
        out.push(geom::point_on_ray(b, a, spec.get(i, End::End))?);
    }
    Ok(out)
}

/// Builds the circle about the incenter through the first endpoint and
/// measures how far the remaining endpoints stray from it.
///
/// A spec that fails its theorem condition is not an error: the result
/// carries a failed report.
pub fn conway_circle(
    poly: &TangentialPolygon,
    spec: &ExtensionSpec,
    tol: &Tolerance,
) -> Result<ConwayCircleResult> {
    let endpoints = apply_extensions(poly, spec)?;
    let center = poly.incenter();
    let radius = endpoints[0].distance(center);
    let report = verify::concyclic_about(&endpoints, center, tol);
    let chord_lengths = poly
        .side_lengths()
        .iter()
        .enumerate()
        .map(|(i, l)| spec.get(i, End::Start) + l + spec.get(i, End::End))
        .collect();
    Ok(ConwayCircleResult {
        circle: Circle { center, radius },
        endpoints,
        chord_lengths,
        max_residual: report.max_residual,
        report,
    })
}

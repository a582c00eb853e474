//! Independent checks: concyclicity residuals, the tangent-length oracle and
//! seeded fuzzing of the iff-conditions in both directions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conway::{self, End, ExtensionSpec};
use crate::error::{Error, Result};
use crate::geom::{self, Point2, Tolerance};
use crate::tangential::{self, TangentialPolygon};

/// Verdict of a numerical check. `passed` is `max_residual <= tolerance`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub details: Vec<(String, f64)>,
}

impl CheckReport {
    pub fn from_residual(max_residual: f64, tolerance: f64) -> Self {
        CheckReport::default().finish(max_residual, tolerance)
    }

    pub fn with(mut self, label: impl Into<String>, value: f64) -> Self {
        self.details.push((label.into(), value));
        self
    }

    pub fn finish(mut self, max_residual: f64, tolerance: f64) -> Self {
        self.max_residual = max_residual;
        self.tolerance = tolerance;
        self.passed = max_residual <= tolerance;
        self
    }

    pub fn detail(&self, label: &str) -> Option<f64> {
        self.details
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| *v)
    }
}

/// Residual `max | |p − center| − R |` with `R` the distance to the first point.
pub fn concyclic_about(points: &[Point2], center: Point2, tol: &Tolerance) -> CheckReport {
    let tolerance = tol.for_points(points);
    let Some(first) = points.first() else {
        return CheckReport::from_residual(0.0, tolerance);
    };
    let radius = first.distance(center);
    let mut report = CheckReport::default().with("radius", radius);
    let mut worst = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        let d = p.distance(center);
        worst = worst.max((d - radius).abs());
        report = report.with(format!("distance_{}", i + 1), d);
    }
    report.finish(worst, tolerance)
}

/// Measures `t + x` at every side end straight from coordinates and reports
/// the spread of `|t + x|`.
///
/// `t` is the signed distance from the vertex to the foot of the
/// perpendicular from the incenter, so the endpoint lies
/// `√(d² + (t + x)²)` from the incenter with `d` the foot distance. Equal
/// `|t + x|` at all ends is exactly concyclicity; the sign is reported in
/// the details (a spec can mirror some ends through the incircle).
pub fn tangent_length_oracle(
    poly: &TangentialPolygon,
    spec: &ExtensionSpec,
    tol: &Tolerance,
) -> Result<CheckReport> {
    let n = poly.n();
    if spec.sides() != n {
        return Err(Error::ArityMismatch {
            expected: 2 * n,
            got: spec.per_end().len(),
        });
    }
    let center = poly.incenter();
    let v = poly.vertices();
    let mut offsets = Vec::with_capacity(2 * n);
    let mut foot_distance = 0.0f64;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        let foot = geom::foot_of_perpendicular(center, a, b)?;
        let dir = (b - a) * (1.0 / a.distance(b));
        foot_distance = foot_distance.max(foot.distance(center));
        offsets.push((foot - a).dot(dir) + spec.get(i, End::Start));
        offsets.push((b - foot).dot(dir) + spec.get(i, End::End));
    }
    let max = offsets
        .iter()
        .map(|c| c.abs())
        .fold(f64::NEG_INFINITY, f64::max);
    let min = offsets
        .iter()
        .map(|c| c.abs())
        .fold(f64::INFINITY, f64::min);
    let spread = max - min;
    let signed_spread = offsets.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - offsets.iter().copied().fold(f64::INFINITY, f64::min);
    let predicted_diameter = 2.0 * foot_distance.hypot(max);
    let mut report = CheckReport::default()
        .with("signed_spread", signed_spread)
        .with("predicted_radius", 0.5 * predicted_diameter);
    for (j, c) in offsets.iter().enumerate() {
        report = report.with(format!("t_plus_x_{}", j + 1), *c);
    }
    Ok(report.finish(spread, tol.effective(predicted_diameter)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    Any,
}

impl Parity {
    fn admits(self, n: usize) -> bool {
        match self {
            Parity::Odd => n % 2 == 1,
            Parity::Even => n.is_multiple_of(2),
            Parity::Any => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    /// Inclusive vertex-count range.
    pub n_range: (usize, usize),
    pub parity: Parity,
    /// Inclusive range for the random tangent lengths.
    pub length_range: (f64, f64),
    /// Size of the single-vertex perturbation in negative tests; 0 skips them.
    pub perturbation: f64,
}

impl FuzzConfig {
    pub fn odd(seed: u64, trials: usize) -> Self {
        FuzzConfig {
            seed,
            trials,
            n_range: (3, 9),
            parity: Parity::Odd,
            length_range: (0.5, 5.0),
            perturbation: 1e-2,
        }
    }

    pub fn even(seed: u64, trials: usize) -> Self {
        FuzzConfig {
            n_range: (4, 8),
            parity: Parity::Even,
            ..Self::odd(seed, trials)
        }
    }

    fn vertex_counts(&self) -> Vec<usize> {
        (self.n_range.0.max(3)..=self.n_range.1)
            .filter(|n| self.parity.admits(*n))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.length_range;
        let problem = if self.trials == 0 {
            Some("trials must be at least 1".to_string())
        } else if self.n_range.0 < 3 || self.n_range.0 > self.n_range.1 {
            Some(format!("bad vertex-count range {:?}", self.n_range))
        } else if self.vertex_counts().is_empty() {
            Some(format!(
                "no {:?} vertex count in {:?}",
                self.parity, self.n_range
            ))
        } else if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            Some(format!("bad length range {:?}", self.length_range))
        } else if !(self.perturbation.is_finite() && self.perturbation >= 0.0) {
            Some(format!("bad perturbation {}", self.perturbation))
        } else {
            None
        };
        problem.map_or(Ok(()), |p| Err(Error::InvalidConfig(p)))
    }
}

/// Generator for trial `index`: ChaCha8 seeded from `seed`, stream `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws a vertex count and tangent lengths, then builds the polygon.
pub fn random_tangential_polygon<R: Rng + ?Sized>(
    config: &FuzzConfig,
    rng: &mut R,
) -> Result<TangentialPolygon> {
    config.validate()?;
    let counts = config.vertex_counts();
    let n = counts[rng.random_range(0..counts.len())];
    let (lo, hi) = config.length_range;
    let t: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    let r = tangential::inradius_from_tangent_lengths(&t)?;
    tangential::build_polygon(&t, r)
}

/// Aggregate outcome of [`fuzz_iff`]. Merging is order independent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub trials: usize,
    pub perturbation: f64,
    pub trials_by_n: BTreeMap<usize, usize>,
    pub positive_passed: usize,
    pub positive_failed: usize,
    pub negative_tests: usize,
    pub negative_failed: usize,
    pub negative_escaped: usize,
    /// Negative tests whose concyclicity residual fell below `perturbation / 4`.
    pub weak_negatives: usize,
    pub negative_skipped: bool,
    /// Trials where the condition check, the residual check and the oracle
    /// did not all return the same verdict.
    pub verdict_disagreements: usize,
    pub max_positive_residual: f64,
    pub max_positive_residual_rel: f64,
    pub max_positive_oracle_spread: f64,
    pub min_negative_residual: Option<f64>,
    /// `positive_failed + negative_escaped + weak_negatives + verdict_disagreements`.
    pub disagreements: usize,
}

impl FuzzSummary {
    fn empty(config: &FuzzConfig) -> Self {
        FuzzSummary {
            seed: config.seed,
            trials: 0,
            perturbation: config.perturbation,
            trials_by_n: BTreeMap::new(),
            positive_passed: 0,
            positive_failed: 0,
            negative_tests: 0,
            negative_failed: 0,
            negative_escaped: 0,
            weak_negatives: 0,
            negative_skipped: config.perturbation == 0.0,
            verdict_disagreements: 0,
            max_positive_residual: 0.0,
            max_positive_residual_rel: 0.0,
            max_positive_oracle_spread: 0.0,
            min_negative_residual: None,
            disagreements: 0,
        }
    }

    fn merge(mut self, other: FuzzSummary) -> FuzzSummary {
        self.trials += other.trials;
        for (n, c) in other.trials_by_n {
            *self.trials_by_n.entry(n).or_default() += c;
        }
        self.positive_passed += other.positive_passed;
        self.positive_failed += other.positive_failed;
        self.negative_tests += other.negative_tests;
        self.negative_failed += other.negative_failed;
        self.negative_escaped += other.negative_escaped;
        self.weak_negatives += other.weak_negatives;
        self.verdict_disagreements += other.verdict_disagreements;
        self.max_positive_residual = self.max_positive_residual.max(other.max_positive_residual);
        self.max_positive_residual_rel = self
            .max_positive_residual_rel
            .max(other.max_positive_residual_rel);
        self.max_positive_oracle_spread = self
            .max_positive_oracle_spread
            .max(other.max_positive_oracle_spread);
        self.min_negative_residual = match (self.min_negative_residual, other.min_negative_residual)
        {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.recount();
        self
    }

    fn recount(&mut self) {
        self.disagreements = self.positive_failed
            + self.negative_escaped
            + self.weak_negatives
            + self.verdict_disagreements;
    }
}

/// Verdicts of the three independent checks on one spec.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdicts {
    /// `None` for even polygons, which only have a necessary condition.
    pub condition: Option<CheckReport>,
    pub concyclic: CheckReport,
    pub oracle: CheckReport,
}

impl Verdicts {
    pub fn all_pass(&self) -> bool {
        self.concyclic.passed
            && self.oracle.passed
            && self.condition.as_ref().is_none_or(|c| c.passed)
    }

    pub fn all_fail(&self) -> bool {
        !self.concyclic.passed
            && !self.oracle.passed
            && self.condition.as_ref().is_none_or(|c| !c.passed)
    }

    pub fn agree(&self) -> bool {
        self.all_pass() || self.all_fail()
    }
}

/// Runs the applicable condition check, the concyclicity residual and the
/// oracle on `spec`. Triangles use the opposite-side condition, other odd
/// polygons the `μ`-indexed one.
pub fn evaluate(
    poly: &TangentialPolygon,
    spec: &ExtensionSpec,
    tol: &Tolerance,
) -> Result<Verdicts> {
    let condition = match poly.n() {
        3 => Some(conway::theorem1_condition_check(poly, spec, tol)?),
        n if n % 2 == 1 => Some(conway::theorem2_condition_check(poly, spec, tol)?),
        _ => None,
    };
    let concyclic = conway::conway_circle(poly, spec, tol)?.report;
    let oracle = tangent_length_oracle(poly, spec, tol)?;
    Ok(Verdicts {
        condition,
        concyclic,
        oracle,
    })
}

/// A theorem-conforming spec for a random polygon. Odd polygons pick the
/// common `t + x` uniformly in `[s/2, 3s/2)`, which keeps it well clear of the
/// mirror configuration; even polygons use the fixed extensions.
fn conforming_spec<R: Rng + ?Sized>(
    poly: &TangentialPolygon,
    rng: &mut R,
) -> Result<ExtensionSpec> {
    let n = poly.n();
    if n.is_multiple_of(2) {
        return conway::theorem3_even_extensions(poly);
    }
    let common = poly.semiperimeter() * rng.random_range(0.5..1.5);
    let x_1 = common - poly.tangent_lengths()[0];
    if n == 3 {
        conway::theorem1_family(poly, x_1)
    } else {
        conway::theorem2_family(poly, x_1)
    }
}

fn run_trial(config: &FuzzConfig, index: u64, tol: &Tolerance) -> Result<FuzzSummary> {
    let mut rng = trial_rng(config.seed, index);
    let poly = random_tangential_polygon(config, &mut rng)?;
    let spec = conforming_spec(&poly, &mut rng)?;
    let mut out = FuzzSummary::empty(config);
    out.trials = 1;
    out.trials_by_n.insert(poly.n(), 1);

    let positive = evaluate(&poly, &spec, tol)?;
    if positive.all_pass() {
        out.positive_passed = 1;
    } else {
        out.positive_failed = 1;
    }
    if !positive.agree() {
        out.verdict_disagreements += 1;
    }
    out.max_positive_residual = positive.concyclic.max_residual;
    out.max_positive_residual_rel = positive.concyclic.max_residual / poly.diameter();
    out.max_positive_oracle_spread = positive.oracle.max_residual;

    if config.perturbation > 0.0 {
        let k = rng.random_range(0..poly.n());
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let bad = spec.perturbed_vertex(k, sign * config.perturbation);
        let negative = evaluate(&poly, &bad, tol)?;
        out.negative_tests = 1;
        if negative.all_fail() {
            out.negative_failed = 1;
        }
        if negative.concyclic.passed || negative.oracle.passed {
            out.negative_escaped = 1;
        }
        if !negative.agree() {
            out.verdict_disagreements += 1;
        }
        if negative.concyclic.max_residual < config.perturbation / 4.0 {
            out.weak_negatives = 1;
        }
        out.min_negative_residual = Some(negative.concyclic.max_residual);
    }
    out.recount();
    Ok(out)
}

/// Fuzzes the iff-conditions: every conforming spec must pass all checks and
/// every single-vertex perturbation must fail all of them.
///
/// Trials run in parallel; each draws from its own ChaCha stream, so the
/// summary equals [`fuzz_iff_sequential`] bit for bit.
pub fn fuzz_iff(config: &FuzzConfig, tol: &Tolerance) -> Result<FuzzSummary> {
    config.validate()?;
    (0..config.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(config, i, tol))
        .try_reduce(|| FuzzSummary::empty(config), |a, b| Ok(a.merge(b)))
}

pub fn fuzz_iff_sequential(config: &FuzzConfig, tol: &Tolerance) -> Result<FuzzSummary> {
    config.validate()?;
    (0..config.trials as u64).try_fold(FuzzSummary::empty(config), |acc, i| {
        Ok(acc.merge(run_trial(config, i, tol)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangential::{polygon_from_sides, validate_tangential};
    use crate::SideLengthSpec;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn unit_circle_points() -> Vec<Point2> {
        (0..4)
            .map(|k| Point2::from_polar(1.0, k as f64 * FRAC_PI_2))
            .collect()
    }

    #[test]
    fn concyclic_unit_circle() {
        let report = concyclic_about(&unit_circle_points(), Point2::ORIGIN, &tol());
        assert!(report.passed);
        assert!(report.max_residual < 1e-15);
    }

    #[test]
    fn concyclic_detects_radial_shift() {
        let mut pts = unit_circle_points();
        pts[2] = pts[2] * 1.001;
        let report = concyclic_about(&pts, Point2::ORIGIN, &tol());
        assert!(!report.passed);
        assert_abs_diff_eq!(report.max_residual, 1e-3, epsilon = 1e-12);
    }

    #[test]
    fn oracle_classic_3_4_5() {
        let poly = polygon_from_sides(&SideLengthSpec::odd(vec![3.0, 4.0, 5.0])).unwrap();
        let spec = conway::conway_extensions_triangle(&poly).unwrap();
        let report = tangent_length_oracle(&poly, &spec, &tol()).unwrap();
        assert!(report.passed);
        for j in 1..=6 {
            let c = report.detail(&format!("t_plus_x_{j}")).unwrap();
            assert_abs_diff_eq!(c, 6.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn oracle_zero_spec_fails_on_scalene() {
        let poly = polygon_from_sides(&SideLengthSpec::odd(vec![3.0, 4.0, 5.0])).unwrap();
        let report =
            tangent_length_oracle(&poly, &ExtensionSpec::zeros(3).unwrap(), &tol()).unwrap();
        assert!(!report.passed);
        // spread of tangent lengths (2, 1, 3)
        assert_abs_diff_eq!(report.max_residual, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn oracle_arity_mismatch() {
        let poly = polygon_from_sides(&SideLengthSpec::odd(vec![3.0, 4.0, 5.0])).unwrap();
        assert!(matches!(
            tangent_length_oracle(&poly, &ExtensionSpec::zeros(5).unwrap(), &tol()),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn random_polygon_is_deterministic() {
        let config = FuzzConfig {
            n_range: (3, 3),
            ..FuzzConfig::odd(1, 1)
        };
        let a = random_tangential_polygon(&config, &mut trial_rng(1, 0)).unwrap();
        let b = random_tangential_polygon(&config, &mut trial_rng(1, 0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 3);
        let c = random_tangential_polygon(&config, &mut trial_rng(2, 0)).unwrap();
        assert_ne!(a.vertices(), c.vertices());
    }

    #[test]
    fn random_polygons_validate() {
        let config = FuzzConfig {
            parity: Parity::Any,
            ..FuzzConfig::odd(11, 1000)
        };
        let mut rng = trial_rng(11, 0);
        for _ in 0..1000 {
            let poly = random_tangential_polygon(&config, &mut rng).unwrap();
            let recovered = validate_tangential(poly.vertices()).unwrap();
            let scale = poly.diameter();
            assert!(recovered.incenter().distance(poly.incenter()) < 1e-9 * scale);
            assert!((recovered.inradius() - poly.inradius()).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn config_validation() {
        assert!(FuzzConfig::odd(1, 0).validate().is_err());
        assert!(FuzzConfig {
            n_range: (4, 4),
            ..FuzzConfig::odd(1, 1)
        }
        .validate()
        .is_err());
        assert!(FuzzConfig {
            length_range: (0.0, 1.0),
            ..FuzzConfig::odd(1, 1)
        }
        .validate()
        .is_err());
        assert!(FuzzConfig {
            perturbation: -1.0,
            ..FuzzConfig::odd(1, 1)
        }
        .validate()
        .is_err());
        assert!(FuzzConfig::even(1, 1).validate().is_ok());
    }

    #[test]
    fn fuzz_odd_has_no_disagreements() {
        let summary = fuzz_iff(&FuzzConfig::odd(3, 300), &tol()).unwrap();
        assert_eq!(summary.trials, 300);
        assert_eq!(summary.disagreements, 0, "{summary:?}");
        assert_eq!(summary.negative_failed, 300);
        assert!(summary.min_negative_residual.unwrap() >= 2.5e-3);
    }

    #[test]
    fn fuzz_even_positive_tests_pass() {
        let summary = fuzz_iff(&FuzzConfig::even(5, 200), &tol()).unwrap();
        assert_eq!(summary.positive_passed, 200);
        assert_eq!(summary.disagreements, 0, "{summary:?}");
    }

    #[test]
    fn zero_perturbation_skips_negatives() {
        let config = FuzzConfig {
            perturbation: 0.0,
            ..FuzzConfig::odd(3, 20)
        };
        let summary = fuzz_iff(&config, &tol()).unwrap();
        assert!(summary.negative_skipped);
        assert_eq!(summary.negative_tests, 0);
        assert_eq!(summary.min_negative_residual, None);
    }

    #[test]
    fn parallel_matches_sequential() {
        let config = FuzzConfig {
            parity: Parity::Any,
            ..FuzzConfig::odd(42, 150)
        };
        assert_eq!(
            fuzz_iff(&config, &tol()).unwrap(),
            fuzz_iff_sequential(&config, &tol()).unwrap()
        );
    }
}

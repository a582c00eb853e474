//! Property tests over randomized polygons and extension specs.

use std::f64::consts::TAU;

use conway_core::conway::{self, End, ExtensionSpec};
use conway_core::geom::{self, Circle, Point2, Tolerance};
use conway_core::tangential::{self, SideLengthSpec, TangentialPolygon};
use conway_core::verify;
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn polygon_from_tangents(t: &[f64]) -> TangentialPolygon {
    let r = tangential::inradius_from_tangent_lengths(t).unwrap();
    tangential::build_polygon(t, r).unwrap()
}

fn tangents(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    n.prop_flat_map(|n| prop::collection::vec(0.5f64..5.0, n))
}

fn odd_tangents() -> impl Strategy<Value = Vec<f64>> {
    (1usize..=4).prop_flat_map(|k| prop::collection::vec(0.5f64..5.0, 2 * k + 1))
}

fn even_tangents() -> impl Strategy<Value = Vec<f64>> {
    (2usize..=4).prop_flat_map(|k| prop::collection::vec(0.5f64..5.0, 2 * k))
}

fn point() -> impl Strategy<Value = Point2> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(x, y)| Point2::new(x, y))
}

/// Convex polygon: sorted angles on an ellipse.
fn convex_polygon() -> impl Strategy<Value = Vec<Point2>> {
    (
        3usize..9,
        0.5f64..3.0,
        0.5f64..3.0,
        -5.0f64..5.0,
        -5.0f64..5.0,
    )
        .prop_flat_map(|(n, a, b, cx, cy)| {
            prop::collection::vec(0.0f64..1.0, n).prop_filter_map(
                "angles too close",
                move |mut u| {
                    u.sort_by(f64::total_cmp);
                    let gaps_ok = (0..n).all(|i| {
                        let next = if i + 1 == n { u[0] + 1.0 } else { u[i + 1] };
                        let gap = next - u[i];
                        gap > 0.02 && gap < 0.45
                    });
                    gaps_ok.then(|| {
                        u.iter()
                            .map(|s| {
                                let th = s * TAU;
                                Point2::new(cx + a * th.cos(), cy + b * th.sin())
                            })
                            .collect()
                    })
                },
            )
        })
}

fn side_direction(p: &[Point2], i: usize) -> f64 {
    let d = p[(i + 1) % p.len()] - p[i];
    d.y.atan2(d.x)
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn incenter_is_equidistant_from_side_lines(a in point(), b in point(), c in point()) {
        let area2 = (b - a).cross(c - a).abs();
        prop_assume!(area2 > 1e-3 * geom::diameter(&[a, b, c]).powi(2));
        let circle = geom::incircle_of_triangle(a, b, c).unwrap();
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let d = (v - u).cross(circle.center - u).abs() / u.distance(v);
            prop_assert!((d - circle.radius).abs() <= 1e-9 * geom::diameter(&[a, b, c]));
        }
    }

    #[test]
    fn point_on_ray_extends_past_origin(o in point(), t in point(), d in 0.01f64..20.0) {
        prop_assume!(o.distance(t) > 1e-3);
        let p = geom::point_on_ray(o, t, d).unwrap();
        prop_assert!((p.distance(o) - d).abs() < 1e-12 * (1.0 + d));
        let scale = o.distance(t) + d;
        prop_assert!((t - o).cross(p - o).abs() < 1e-9 * scale * scale);
        // o lies between t and p
        prop_assert!((t - o).dot(p - o) < 0.0);
    }

    #[test]
    fn sides_round_trip(t in tangents(3..=9)) {
        let lengths: Vec<f64> = (0..t.len()).map(|i| t[i] + t[(i + 1) % t.len()]).collect();
        let spec = if t.len() % 2 == 0 {
            SideLengthSpec::even(lengths.clone(), t[0])
        } else {
            SideLengthSpec::odd(lengths.clone())
        };
        let poly = tangential::polygon_from_sides(&spec).unwrap();
        let v = poly.vertices();
        for (i, l) in lengths.iter().enumerate() {
            let measured = v[i].distance(v[(i + 1) % v.len()]);
            prop_assert!((measured - l).abs() <= 1e-9 * l);
        }
        if let Some(h0) = spec.h0 {
            prop_assert!((poly.tangent_lengths()[0] - h0).abs() <= 1e-12 * h0);
        }
        prop_assert!(tangential::closure_defect(poly.tangent_lengths(), poly.inradius()) < 1e-12);
        prop_assert!(poly.check_invariants(&tol()).passed);
        prop_assert!(poly.is_convex());
    }

    #[test]
    fn tangency_feet_match_stored_points(t in tangents(3..=9)) {
        let poly = polygon_from_tangents(&t);
        let n = poly.n();
        let v = poly.vertices();
        let eps = 1e-9 * poly.diameter();
        for i in 0..n {
            let foot = geom::foot_of_perpendicular(poly.incenter(), v[i], v[(i + 1) % n]).unwrap();
            prop_assert!(foot.distance(poly.tangency_points()[i]) <= eps);
            prop_assert!((foot.distance(v[i]) - poly.tangent_lengths()[i]).abs() <= eps);
            prop_assert!((foot.distance(v[(i + 1) % n]) - poly.tangent_lengths()[(i + 1) % n]).abs() <= eps);
        }
    }

    #[test]
    fn even_polygons_satisfy_pitot(t in even_tangents()) {
        let poly = polygon_from_tangents(&t);
        let (odd, even): (Vec<_>, Vec<_>) = poly.side_lengths().iter().enumerate().partition(|(i, _)| i % 2 == 0);
        let a: f64 = odd.iter().map(|(_, l)| **l).sum();
        let b: f64 = even.iter().map(|(_, l)| **l).sum();
        prop_assert!((a - b).abs() <= 1e-9 * poly.perimeter());
    }

    #[test]
    fn parallel_polygon_keeps_side_directions(p in convex_polygon(), r in 0.2f64..4.0, c in point()) {
        let circle = Circle::new(c, r).unwrap();
        let poly = tangential::parallel_tangential_polygon(&p, &circle).unwrap();
        for i in 0..p.len() {
            let gap = angle_gap(side_direction(&p, i), side_direction(poly.vertices(), i));
            prop_assert!(gap < 1e-12, "side {} turned by {}", i + 1, gap);
        }
        prop_assert!(poly.check_invariants(&tol()).passed);
        prop_assert!(poly.is_convex());
        let again = tangential::validate_tangential(poly.vertices()).unwrap();
        prop_assert!((again.inradius() - r).abs() < 1e-9 * poly.diameter());
    }

    #[test]
    fn validate_recovers_constructed_polygons(t in tangents(3..=9), angle in 0.0f64..TAU, shift in point()) {
        let poly = polygon_from_tangents(&t).rigid_motion(angle, shift);
        let again = tangential::validate_tangential(poly.vertices()).unwrap();
        let eps = 1e-9 * poly.diameter();
        prop_assert!(again.incenter().distance(poly.incenter()) < eps);
        for (a, b) in again.tangent_lengths().iter().zip(poly.tangent_lengths()) {
            prop_assert!((a - b).abs() < eps);
        }
    }

    #[test]
    fn theorem_specs_make_t_plus_x_constant(t in tangents(3..=9), x1 in -3.0f64..8.0) {
        let poly = polygon_from_tangents(&t);
        let spec = if poly.n().is_multiple_of(2) {
            conway::theorem3_even_extensions(&poly).unwrap()
        } else {
            conway::theorem2_family(&poly, x1).unwrap()
        };
        let c: Vec<f64> = poly.tangent_lengths().iter().zip(spec.vertex_values()).map(|(t, x)| t + x).collect();
        let scale = c.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for v in &c {
            prop_assert!((v - c[0]).abs() <= 1e-12 * scale);
        }
        prop_assert_eq!(spec.vertex_symmetry_violation(), 0.0);
    }

    #[test]
    fn equal_chords(t in odd_tangents(), x1 in 0.0f64..8.0) {
        let poly = polygon_from_tangents(&t);
        let spec = conway::theorem2_family(&poly, x1).unwrap();
        let result = conway::conway_circle(&poly, &spec, &tol()).unwrap();
        let first = result.chord_lengths[0];
        for chord in &result.chord_lengths {
            prop_assert!((chord - first).abs() <= 1e-9 * first);
        }
        let perim = conway::conway_circle(&poly, &conway::corollary2_extensions(&poly).unwrap(), &tol()).unwrap();
        for chord in &perim.chord_lengths {
            prop_assert!((chord - poly.perimeter()).abs() <= 1e-9 * poly.perimeter());
        }
    }

    #[test]
    fn odd_iff_both_directions(t in odd_tangents(), u in 0.5f64..1.5, k in 0usize..9, delta in prop::sample::select(vec![-0.05, -0.01, 0.01, 0.05])) {
        let poly = polygon_from_tangents(&t);
        let x1 = u * poly.semiperimeter() - poly.tangent_lengths()[0];
        let spec = conway::theorem2_family(&poly, x1).unwrap();
        let good = verify::evaluate(&poly, &spec, &tol()).unwrap();
        prop_assert!(good.all_pass());
        let bad = verify::evaluate(&poly, &spec.perturbed_vertex(k % poly.n(), delta), &tol()).unwrap();
        prop_assert!(bad.all_fail());
    }

    #[test]
    fn oracle_agrees_with_concyclicity(t in tangents(3..=9), x in prop::collection::vec(-1.0f64..6.0, 18)) {
        let poly = polygon_from_tangents(&t);
        let n = poly.n();
        // random specs: one conforming, one arbitrary
        let conforming = if n.is_multiple_of(2) {
            conway::theorem3_even_extensions(&poly).unwrap()
        } else {
            conway::corollary2_extensions(&poly).unwrap()
        };
        let arbitrary = ExtensionSpec::from_per_end(x[..2 * n].to_vec()).unwrap();
        for spec in [conforming, arbitrary] {
            let oracle = verify::tangent_length_oracle(&poly, &spec, &tol()).unwrap();
            let circle = conway::conway_circle(&poly, &spec, &tol()).unwrap();
            prop_assert_eq!(oracle.passed, circle.report.passed);
        }
    }

    #[test]
    fn rigid_motion_covariance(t in tangents(3..=9), angle in 0.0f64..TAU, shift in point()) {
        let poly = polygon_from_tangents(&t);
        let moved = poly.rigid_motion(angle, shift);
        let spec = if poly.n().is_multiple_of(2) {
            conway::theorem3_even_extensions(&poly).unwrap()
        } else {
            conway::corollary2_extensions(&poly).unwrap()
        };
        let a = conway::conway_circle(&poly, &spec, &tol()).unwrap();
        let b = conway::conway_circle(&moved, &spec, &tol()).unwrap();
        let eps = 1e-9 * (a.circle.radius + shift.norm());
        let map = |p: Point2| p.rotate_about(Point2::ORIGIN, angle) + shift;
        prop_assert!(map(a.circle.center).distance(b.circle.center) < eps);
        prop_assert!((a.circle.radius - b.circle.radius).abs() < eps);
        for (p, q) in a.endpoints.iter().zip(&b.endpoints) {
            prop_assert!(map(*p).distance(*q) < eps);
        }
    }

    #[test]
    fn triangle_chords_rotate_into_each_other(t in tangents(3..=3), x_a in -1.0f64..6.0) {
        let poly = polygon_from_tangents(&t);
        let spec = conway::theorem1_family(&poly, x_a).unwrap();
        let result = conway::conway_circle(&poly, &spec, &tol()).unwrap();
        let center = poly.incenter();
        let tp = poly.tangency_points();
        for i in 0..3 {
            let j = (i + 1) % 3;
            let angle = (tp[j] - center).y.atan2((tp[j] - center).x) - (tp[i] - center).y.atan2((tp[i] - center).x);
            let start = result.endpoints[2 * i].rotate_about(center, angle);
            let end = result.endpoints[2 * i + 1].rotate_about(center, angle);
            let eps = 1e-9 * result.circle.radius.max(1.0);
            prop_assert!(start.distance(result.endpoints[2 * j]) < eps);
            prop_assert!(end.distance(result.endpoints[2 * j + 1]) < eps);
        }
    }

    #[test]
    fn theorem2_on_triangles_is_theorem1(t in tangents(3..=3), x_a in -2.0f64..6.0) {
        let poly = polygon_from_tangents(&t);
        let a = conway::theorem1_family(&poly, x_a).unwrap();
        let b = conway::theorem2_family(&poly, x_a).unwrap();
        for (x, y) in a.per_end().iter().zip(b.per_end()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn corollary3_is_corollary2_on_pentagons(t in prop::collection::vec(0.5f64..5.0, 5)) {
        let lambda: Vec<f64> = (0..5).map(|i| t[i] + t[(i + 1) % 5]).collect();
        // λ = (AB, BC, CD, DE, EA) = (d, e, a, b, c)
        let [d, e, a, b, c] = [lambda[0], lambda[1], lambda[2], lambda[3], lambda[4]];
        let built = conway::corollary3_pentagon(a, b, c, d, e).unwrap();
        let general = conway::corollary2_extensions(&built.polygon).unwrap();
        for (x, y) in built.spec.per_end().iter().zip(general.per_end()) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn corollary4_is_theorem3_on_quadrilaterals(t in prop::collection::vec(0.5f64..5.0, 4)) {
        let [a, b, c, d] = [t[0] + t[1], t[1] + t[2], t[2] + t[3], t[3] + t[0]];
        let d0 = t[3];
        let built = conway::corollary4_quadrilateral(a, b, c, d, d0).unwrap();
        let values = conway::corollary4_values(a, b, c, d, d0);
        for (x, y) in built.spec.vertex_values().iter().zip(values) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
        let result = conway::conway_circle(&built.polygon, &built.spec, &tol()).unwrap();
        prop_assert!(result.report.passed);
    }
}

#[test]
fn perturbation_response_is_monotone() {
    let poly = polygon_from_tangents(&[1.0, 2.5, 0.7, 3.0, 1.4]);
    let spec = conway::corollary2_extensions(&poly).unwrap();
    for k in 0..5 {
        let mut last = 0.0;
        for step in 0..12 {
            let delta = 1e-4 * 2f64.powi(step);
            let residual = conway::conway_circle(&poly, &spec.perturbed_vertex(k, delta), &tol())
                .unwrap()
                .max_residual;
            assert!(
                residual >= last,
                "vertex {k}: {residual} < {last} at δ = {delta}"
            );
            last = residual;
        }
    }
}

#[test]
fn negative_extensions_land_inside_the_side() {
    let poly = polygon_from_tangents(&[1.0, 2.0, 3.0]);
    let spec = ExtensionSpec::from_vertex_values(&[-0.5, -0.5, -0.5]).unwrap();
    let pts = conway::apply_extensions(&poly, &spec).unwrap();
    let v = poly.vertices();
    for i in 0..3 {
        let a = v[i];
        let b = v[(i + 1) % 3];
        let s = (pts[2 * i] - a).dot(b - a) / a.distance(b);
        assert!((s - spec.get(i, End::Start).abs()).abs() < 1e-12);
    }
}

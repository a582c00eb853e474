//! Fixtures shared by the benchmarks.

use conway_core::tangential::{self, TangentialPolygon};

/// `n` deterministic tangent lengths in `[0.5, 5)`.
pub fn tangent_lengths(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 + 4.5 * ((i as f64 * 0.618_033_988_75).fract()))
        .collect()
}

/// Side lengths `t_i + t_{i+1}` of [`tangent_lengths`].
pub fn side_lengths(n: usize) -> Vec<f64> {
    let t = tangent_lengths(n);
    (0..n).map(|i| t[i] + t[(i + 1) % n]).collect()
}

pub fn polygon(n: usize) -> TangentialPolygon {
    let t = tangent_lengths(n);
    let r = tangential::inradius_from_tangent_lengths(&t).expect("positive tangents");
    tangential::build_polygon(&t, r).expect("closed polygon")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        for n in [3, 4, 9, 64] {
            let p = polygon(n);
            assert_eq!(p.n(), n);
            assert!(p.is_convex());
            assert_eq!(side_lengths(n).len(), n);
        }
    }
}

//! Bracketed bisection for monotone scalar equations.

/// Bisect `f` on `[lo, hi]` where `f(lo) > 0 >= f(hi)`.
///
/// Stops once the bracket is narrower than `1e-14 * (1 + |mid|)` or the
/// midpoint no longer splits it.
pub(crate) fn bisect_decreasing<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    debug_assert!(lo < hi);
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if hi - lo < 1e-14 * (1.0 + mid.abs()) || mid <= lo || mid >= hi {
            return mid;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let root = bisect_decreasing(|x| 2.0 - x * x, 0.0, 2.0);
        assert!((root - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn linear_root_is_tight() {
        let root = bisect_decreasing(|x| 3.0 - x, -10.0, 10.0);
        assert!((root - 3.0).abs() < 1e-13);
    }
}

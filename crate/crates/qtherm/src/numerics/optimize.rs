//! 1-D maximization: coarse grid scan plus golden-section refinement.

const GRID_POINTS: usize = 256;
const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Maximize f on [lo, hi] to absolute argument tolerance `tol`.
///
/// A 256-point scan brackets the maximum, golden-section refines it.
/// For a function that is flat (or maximal at the left edge) the smallest
/// argument wins the tie, so the result is deterministic.
pub fn maximize_1d<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo < hi);
    debug_assert!(tol > 0.0);

    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let mut best_i = 0usize;
    let mut best_f = f(lo);
    for i in 1..GRID_POINTS {
        let x = lo + step * i as f64;
        let v = f(x);
        if v > best_f {
            best_f = v;
            best_i = i;
        }
    }

    let a = lo.max(lo + step * (best_i as f64 - 1.0));
    let b = hi.min(lo + step * (best_i as f64 + 1.0));
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x_star = 0.5 * (a + b);
    let f_star = f(x_star);

    // smallest-argument tie-break: a flat plateau collapses to lo
    let f_lo = f(lo);
    if f_lo >= f_star {
        return (lo, f_lo);
    }
    (x_star, f_star)
}

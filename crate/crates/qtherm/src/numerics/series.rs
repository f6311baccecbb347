//! Infinite-series summation with a consecutive-small-term stop rule.

/// Outcome of a series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub converged: bool,
}

/// Sum term(1) + term(2) + ... until three consecutive terms satisfy
/// |term(n)| < tol * max(1, |partial sum|), or n reaches `n_max`.
///
/// Divergence is not an error here; the caller inspects `converged`.
/// The single small-term check alone would mis-fire on slowly decaying
/// thermal sums, hence the triple requirement.
pub fn sum_series<F>(mut term: F, tol: f64, n_max: usize) -> SeriesResult
where
    F: FnMut(usize) -> f64,
{
    debug_assert!(tol > 0.0);
    debug_assert!(n_max >= 1);
    let mut acc = 0.0_f64;
    let mut comp = 0.0_f64; // Kahan compensation
    let mut consecutive = 0usize;
    let mut n = 0usize;
    while n < n_max {
        n += 1;
        let t = term(n);
        let y = t - comp;
        let s = acc + y;
        comp = (s - acc) - y;
        acc = s;
        if t.abs() < tol * acc.abs().max(1.0) {
            consecutive += 1;
            if consecutive >= 3 {
                return SeriesResult { value: acc, terms_used: n, converged: true };
            }
        } else {
            consecutive = 0;
        }
    }
    SeriesResult { value: acc, terms_used: n, converged: false }
}

//! Ordinary least squares for exponential-decay extraction.

use super::NumericsError;

/// Result of regressing ln D against t for the model D(t) = exp(-t/a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// a in D = exp(-t/a); infinite when the data do not decay.
    pub decay_constant: f64,
    pub slope: f64,
    pub intercept: f64,
    /// Standard error propagated onto the decay constant.
    pub stderr_decay: f64,
    pub r_squared: f64,
}

/// Least squares of ys on xs. Needs at least 3 points and non-degenerate xs.
pub fn linfit(xs: &[f64], ys: &[f64]) -> Result<FitResult, NumericsError> {
    let n = xs.len();
    if n < 3 || ys.len() != n {
        return Err(NumericsError::TooFewPoints(n.min(ys.len())));
    }
    let nf = n as f64;
    let xbar = xs.iter().sum::<f64>() / nf;
    let ybar = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
        syy += (y - ybar) * (y - ybar);
    }
    if sxx <= 0.0 {
        return Err(NumericsError::DegenerateAbscissae);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;

    let mut ss_res = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - (intercept + slope * x);
        ss_res += r * r;
    }
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0 // constant data fitted exactly by a flat line
    };
    let stderr_slope = (ss_res / ((nf - 2.0) * sxx)).sqrt();
    let decay_constant = if slope < 0.0 { -1.0 / slope } else { f64::INFINITY };
    let stderr_decay = if slope < 0.0 {
        stderr_slope / (slope * slope)
    } else {
        f64::INFINITY
    };
    Ok(FitResult { decay_constant, slope, intercept, stderr_decay, r_squared })
}

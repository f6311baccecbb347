//! Half-line quadrature against the bath cutoff weight.
//!
//! The spectral integrals all carry the factor omega^alpha e^(-omega/omega_c)
//! with a fractional Ohmicity power alpha, so the natural rule is generalized
//! Gauss-Laguerre: after the substitution u = omega/omega_c,
//!
//!   int_0^inf omega^alpha e^(-omega/omega_c) f(omega) domega
//!     = omega_c^(alpha+1) sum_i w_i f(omega_c u_i)
//!
//! with (u_i, w_i) the nodes and weights for the weight u^alpha e^(-u).
//! Keeping the algebraic power in the weight matters: putting omega^0.5 into
//! the integrand instead caps plain Gauss-Laguerre near 1e-4 relative error
//! no matter the order, because of the endpoint singularity in derivatives.
//!
//! Nodes come from Newton iteration on the recurrence for the generalized
//! Laguerre polynomial L_n^alpha; rules are cached per (order, alpha).

use super::special::{gamma_unchecked, ln_gamma};
use super::NumericsError;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub(crate) const MAX_ORDER: usize = 512;
const MAX_NEWTON: usize = 60;

type Rule = Arc<Vec<(f64, f64)>>;

fn cache() -> &'static Mutex<HashMap<(usize, u64), Rule>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// L_n^alpha(x) and its derivative via the three-term recurrence.
fn laguerre(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 0..n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf + 1.0 + alpha - x) * p2 - (jf + alpha) * p3) / (jf + 1.0);
    }
    // dL_n/dx = (n L_n - (n + alpha) L_{n-1}) / x
    let n_f = n as f64;
    let dp = (n_f * p1 - (n_f + alpha) * p2) / x;
    (p1, dp)
}

fn build_rule(order: usize, alpha: f64) -> Rule {
    let n = order;
    let nf = n as f64;
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n);
    let mut z = 0.0_f64;
    for i in 0..n {
        // Stroud-Secrest style initial guesses, then Newton.
        if i == 0 {
            z = (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * nf + 1.8 * alpha);
        } else if i == 1 {
            z += (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * nf);
        } else {
            let ai = i as f64 - 1.0;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)
                + 1.26 * ai * alpha / (1.0 + 3.5 * ai))
                * (z - pairs[i - 2].0)
                / (1.0 + 0.3 * alpha);
        }
        let mut p1 = 0.0;
        let mut dp = 1.0;
        for _ in 0..MAX_NEWTON {
            let (p, d) = laguerre(n, alpha, z);
            p1 = p;
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        let _ = p1;
        // w_i = -[Gamma(n+alpha)/Gamma(n)] / (n dp L_{n-1}^alpha)
        let (pm1, _) = laguerre(n - 1, alpha, z);
        let lngam = ln_gamma(nf + alpha) - ln_gamma(nf);
        let w = -lngam.exp() / (dp * nf * pm1);
        pairs.push((z, w));
    }
    Arc::new(pairs)
}

fn rule(order: usize, alpha: f64) -> Result<Rule, NumericsError> {
    if !(8..=MAX_ORDER).contains(&order) {
        return Err(NumericsError::InvalidOrder(order));
    }
    if alpha <= -1.0 || !alpha.is_finite() {
        return Err(NumericsError::InvalidAlpha(alpha));
    }
    let key = (order, alpha.to_bits());
    let mut guard = cache().lock().unwrap();
    if let Some(r) = guard.get(&key) {
        return Ok(r.clone());
    }
    let r = build_rule(order, alpha);
    guard.insert(key, r.clone());
    Ok(r)
}

/// Integrate f(omega) omega^alpha e^(-omega/omega_c) over (0, inf).
///
/// `f` is the smooth residual; any algebraic power of omega belongs in
/// `alpha` so the rule converges at spectral rate.
pub fn integrate_halfline_weighted<F>(
    f: F,
    alpha: f64,
    omega_c: f64,
    order: usize,
) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    debug_assert!(omega_c > 0.0);
    let r = rule(order, alpha)?;
    let mut acc = 0.0;
    let mut comp = 0.0; // Kahan
    for &(x, w) in r.iter() {
        let omega = omega_c * x;
        let v = f(omega);
        if !v.is_finite() {
            return Err(NumericsError::NonFiniteIntegrand(omega));
        }
        let y = w * v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    Ok(omega_c.powf(alpha + 1.0) * acc)
}

/// Integrate f(omega) e^(-omega/omega_c) over (0, inf) (plain weight).
pub fn integrate_halfline<F>(f: F, omega_c: f64, order: usize) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    integrate_halfline_weighted(f, 0.0, omega_c, order)
}

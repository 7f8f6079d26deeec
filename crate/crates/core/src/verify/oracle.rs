//! Exact scalar references for ensembles with closed-form tails, used to
//! cross-check the Monte Carlo machinery itself. Everything here reduces to
//! one-dimensional normal probability computations.

use statrs::distribution::{ContinuousCDF, Normal};

/// Standard normal CDF.
pub fn normal_cdf(t: f64) -> f64 {
    Normal::standard().cdf(t)
}

/// Exact `P(max_j g_j >= t)` for `d` independent standard normals: the
/// largest eigenvalue tail of the diagonal Gaussian ensemble.
pub fn diag_gaussian_lambda_max_tail(d: usize, t: f64) -> f64 {
    1.0 - normal_cdf(t).powi(d as i32)
}

/// Exact `P(max_j |g_j| >= t)`: the spectral-norm tail of the diagonal
/// Gaussian ensemble. For `t <= 0` the event is certain.
pub fn diag_gaussian_norm_tail(d: usize, t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let inside = 2.0 * normal_cdf(t) - 1.0;
    1.0 - inside.powi(d as i32)
}

/// `E max_j |g_j|` by integrating the norm tail; the integrand decays like a
/// Gaussian, so truncating at 12 loses nothing at double precision.
pub fn expected_max_abs_gaussian(d: usize) -> f64 {
    simpson(|t| diag_gaussian_norm_tail(d, t), 0.0, 12.0, 4096)
}

/// `E max_j g_j` (no absolute value): integral of the upper tail on the
/// positive axis minus the integral of the CDF power on the negative axis.
pub fn expected_max_gaussian(d: usize) -> f64 {
    let pos = simpson(|t| diag_gaussian_lambda_max_tail(d, t), 0.0, 12.0, 4096);
    let neg = simpson(|t| normal_cdf(t).powi(d as i32), -12.0, 0.0, 4096);
    pos - neg
}

/// Composite Simpson rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut total = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        total += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    total * h / 3.0
}

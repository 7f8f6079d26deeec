//! Closed-form spectral tail bounds for independent matrix sums.
//!
//! Each evaluator returns the raw bound value (which is allowed to exceed 1;
//! callers clip for display) and rejects parameters outside the regime where
//! the formula is meaningful. All logs are natural.

pub mod curve;
pub mod mgf;

pub use curve::{BoundCurve, GridSpec};
pub use mgf::{master_tail_numeric, MgfKind, MgfModel};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which spectral edge a lower/upper threshold argument refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Event `lambda_min <= threshold`.
    Lower,
    /// Event `lambda_max >= threshold`.
    Upper,
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg.into()))
    }
}

/// Binary relative entropy `D(a || u) = a log(a/u) + (1-a) log((1-a)/(1-u))`
/// with the `0 log 0 = 0` convention. Needs `0 <= a <= 1` and `0 < u < 1`.
pub fn binary_divergence(a: f64, u: f64) -> Result<f64> {
    require(a.is_finite() && (0.0..=1.0).contains(&a), "a must lie in [0, 1]")?;
    require(u.is_finite() && u > 0.0 && u < 1.0, "u must lie in (0, 1)")?;
    let lhs = if a > 0.0 { a * (a / u).ln() } else { 0.0 };
    let rhs = if a < 1.0 { (1.0 - a) * ((1.0 - a) / (1.0 - u)).ln() } else { 0.0 };
    Ok(lhs + rhs)
}

/// `h(u) = (1 + u) log(1 + u) - u` for `u >= 0`; convex, `h(0) = 0`, and
/// `h(u) >= (u^2/2) / (1 + u/3)` everywhere.
pub fn bennett_h(u: f64) -> Result<f64> {
    require(u.is_finite() && u >= 0.0, "h is evaluated on u >= 0")?;
    Ok((1.0 + u) * (1.0 + u).ln() - u)
}

/// Tail for a matrix Gaussian or Rademacher series with variance
/// `sigma2 = || sum_k A_k^2 ||`:
///
///   P(lambda_max >= t) <= d * exp(-t^2 / (2 sigma2))
///
/// and twice that for the two-sided event `||Y|| >= t`.
pub fn gaussian_series_tail(sigma2: f64, d: usize, t: f64, two_sided: bool) -> Result<f64> {
    require(sigma2.is_finite() && sigma2 > 0.0, "sigma2 must be positive")?;
    require(d >= 1, "dimension must be at least 1")?;
    require(t.is_finite() && t >= 0.0, "threshold t must be nonnegative")?;
    let sides = if two_sided { 2.0 } else { 1.0 };
    Ok(sides * d as f64 * (-t * t / (2.0 * sigma2)).exp())
}

/// Tail for a rectangular Gaussian series, `sigma2` the larger of the two
/// summed Gram norms:
///
///   P(||Z|| >= t) <= (d1 + d2) * exp(-t^2 / (2 sigma2))
pub fn rectangular_series_tail(sigma2: f64, d1: usize, d2: usize, t: f64) -> Result<f64> {
    require(sigma2.is_finite() && sigma2 > 0.0, "sigma2 must be positive")?;
    require(d1 >= 1 && d2 >= 1, "dimensions must be at least 1")?;
    require(t.is_finite() && t >= 0.0, "threshold t must be nonnegative")?;
    Ok((d1 + d2) as f64 * (-t * t / (2.0 * sigma2)).exp())
}

/// Divergence-form tail for a mean of `n` independent psd contractions with
/// average-mean spectral edge `mu_bar`:
///
///   lower side (alpha <= mu_bar):  P(lambda_min(mean) <= alpha) <= d * exp(-n D(alpha || mu_bar))
///   upper side (alpha >= mu_bar):  P(lambda_max(mean) >= alpha) <= d * exp(-n D(alpha || mu_bar))
pub fn chernoff_divergence_tail(
    n: usize,
    d: usize,
    mu_bar: f64,
    alpha: f64,
    side: Side,
) -> Result<f64> {
    require(n >= 1, "need at least one summand")?;
    require(d >= 1, "dimension must be at least 1")?;
    require(
        mu_bar.is_finite() && mu_bar > 0.0 && mu_bar < 1.0,
        "mu_bar must lie in (0, 1)",
    )?;
    require(alpha.is_finite() && (0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1]")?;
    match side {
        Side::Lower if alpha > mu_bar => {
            return Err(Error::SideDomain(format!(
                "lower side needs alpha <= mu_bar, got alpha = {alpha}, mu_bar = {mu_bar}"
            )));
        }
        Side::Upper if alpha < mu_bar => {
            return Err(Error::SideDomain(format!(
                "upper side needs alpha >= mu_bar, got alpha = {alpha}, mu_bar = {mu_bar}"
            )));
        }
        _ => {}
    }
    Ok(d as f64 * (-(n as f64) * binary_divergence(alpha, mu_bar)?).exp())
}

/// Multiplicative-form tail for a sum of psd summands bounded by `R`, with
/// `mu` the relevant spectral edge of the summed means:
///
///   lower, delta in [0, 1]:  d * [ e^{-delta} / (1-delta)^{1-delta} ]^{mu/R}
///   upper, delta >= 0:       d * [ e^{delta} / (1+delta)^{1+delta} ]^{mu/R}
///
/// With `simplified`, the lower side becomes `d * exp(-delta^2 mu / (2R))`;
/// the upper side becomes `d * (e/t)^{t mu / R}` with `t = 1 + delta`, valid
/// only for `t >= e` (below that the full form is returned unchanged).
pub fn chernoff_multiplicative_tail(
    mu: f64,
    r: f64,
    d: usize,
    delta: f64,
    side: Side,
    simplified: bool,
) -> Result<f64> {
    require(mu.is_finite() && mu > 0.0, "mu must be positive")?;
    require(r.is_finite() && r > 0.0, "R must be positive")?;
    require(d >= 1, "dimension must be at least 1")?;
    require(delta.is_finite(), "delta must be finite")?;
    let scale = mu / r;
    let df = d as f64;
    match side {
        Side::Lower => {
            if !(0.0..=1.0).contains(&delta) {
                return Err(Error::SideDomain(format!(
                    "lower side needs delta in [0, 1], got {delta}"
                )));
            }
            if simplified {
                return Ok(df * (-delta * delta * scale / 2.0).exp());
            }
            // log bracket = -delta - (1-delta) log(1-delta); the second term
            // vanishes at delta = 1 (x log x -> 0).
            let one_minus = 1.0 - delta;
            let log_bracket = -delta
                - if one_minus > 0.0 {
                    one_minus * one_minus.ln()
                } else {
                    0.0
                };
            Ok(df * (scale * log_bracket).exp())
        }
        Side::Upper => {
            if delta < 0.0 {
                return Err(Error::SideDomain(format!(
                    "upper side needs delta >= 0, got {delta}"
                )));
            }
            let t = 1.0 + delta;
            if simplified && t >= std::f64::consts::E {
                return Ok(df * (scale * t * (1.0 - t.ln())).exp());
            }
            let log_bracket = delta - t * t.ln();
            Ok(df * (scale * log_bracket).exp())
        }
    }
}

/// The three nested tails for a sum of uniformly bounded zero-mean summands
/// (`lambda_max(X_k) <= R`, `sigma2` the summed second-moment norm), from
/// sharpest to simplest; each dominates the previous pointwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernsteinBounds {
    /// `d * exp(-(sigma2/R^2) h(R t / sigma2))`
    pub bennett: f64,
    /// `d * exp(-(t^2/2) / (sigma2 + R t / 3))`
    pub bernstein: f64,
    /// `d * exp(-3 t^2 / (8 sigma2))` for `t <= sigma2/R`, else `d * exp(-3 t / (8 R))`
    pub split: f64,
}

pub fn bernstein_bounded_tail(sigma2: f64, r: f64, d: usize, t: f64) -> Result<BernsteinBounds> {
    require(sigma2.is_finite() && sigma2 > 0.0, "sigma2 must be positive")?;
    require(r.is_finite() && r > 0.0, "R must be positive")?;
    require(d >= 1, "dimension must be at least 1")?;
    require(t.is_finite() && t >= 0.0, "threshold t must be nonnegative")?;
    let df = d as f64;
    let bennett = df * (-(sigma2 / (r * r)) * bennett_h(r * t / sigma2)?).exp();
    let bernstein = df * (-(t * t / 2.0) / (sigma2 + r * t / 3.0)).exp();
    let split = if t <= sigma2 / r {
        df * (-3.0 * t * t / (8.0 * sigma2)).exp()
    } else {
        df * (-3.0 * t / (8.0 * r)).exp()
    };
    Ok(BernsteinBounds { bennett, bernstein, split })
}

/// Tails for a sum whose summands satisfy the moment growth
/// `E X^p <= (p!/2) R^{p-2} A_k^2`, `sigma2 = || sum_k A_k^2 ||`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubexponentialBounds {
    /// `d * exp(-(t^2/2) / (sigma2 + R t))`
    pub main: f64,
    /// `d * exp(-t^2 / (4 sigma2))` for `t <= sigma2/R`, else `d * exp(-t / (4R))`
    pub split: f64,
}

pub fn bernstein_subexp_tail(sigma2: f64, r: f64, d: usize, t: f64) -> Result<SubexponentialBounds> {
    require(sigma2.is_finite() && sigma2 > 0.0, "sigma2 must be positive")?;
    require(r.is_finite() && r > 0.0, "R must be positive")?;
    require(d >= 1, "dimension must be at least 1")?;
    require(t.is_finite() && t >= 0.0, "threshold t must be nonnegative")?;
    let df = d as f64;
    let main = df * (-(t * t / 2.0) / (sigma2 + r * t)).exp();
    let split = if t <= sigma2 / r {
        df * (-t * t / (4.0 * sigma2)).exp()
    } else {
        df * (-t / (4.0 * r)).exp()
    };
    Ok(SubexponentialBounds { main, split })
}

/// Bounded-summand tail for rectangular sums via self-adjoint dilation:
/// dimensions add, the variance takes the larger Gram norm.
pub fn bernstein_rect_tail(sigma2: f64, r: f64, d1: usize, d2: usize, t: f64) -> Result<f64> {
    require(d1 >= 1 && d2 >= 1, "dimensions must be at least 1")?;
    let b = bernstein_bounded_tail(sigma2, r, d1 + d2, t)?;
    Ok(b.bernstein)
}

/// Martingale-difference tail with `sigma2 = || sum_k A_k^2 ||` for the
/// difference-sequence dominators `A_k`:
///
///   P(lambda_max >= t) <= d * exp(-t^2 / (8 sigma2))
///
/// Conditionally symmetric differences sharpen the 1/8 to 1/2.
pub fn azuma_tail(sigma2: f64, d: usize, t: f64, conditionally_symmetric: bool) -> Result<f64> {
    require(sigma2.is_finite() && sigma2 > 0.0, "sigma2 must be positive")?;
    require(d >= 1, "dimension must be at least 1")?;
    require(t.is_finite() && t >= 0.0, "threshold t must be nonnegative")?;
    let denom = if conditionally_symmetric { 2.0 } else { 8.0 };
    Ok(d as f64 * (-t * t / (denom * sigma2)).exp())
}

/// Bounded-differences tail for a matrix-valued function of independent
/// inputs; same exponent as the martingale bound.
pub fn mcdiarmid_tail(sigma2: f64, d: usize, t: f64) -> Result<f64> {
    azuma_tail(sigma2, d, t, false)
}

/// Deterministic bracket for the expected norm of a centered series:
///
///   sigma <= sqrt(E ||Y||^2)  and  E ||Y|| <= sigma * sqrt(2 log(2 e d))
///
/// Returned as `(lower, upper)` for the pair `(sigma, upper bound)`.
pub fn expected_norm_bracket(sigma2: f64, d: usize) -> Result<(f64, f64)> {
    require(sigma2.is_finite() && sigma2 > 0.0, "sigma2 must be positive")?;
    require(d >= 1, "dimension must be at least 1")?;
    let sigma = sigma2.sqrt();
    let upper = sigma * (2.0 * (2.0 * std::f64::consts::E * d as f64).ln()).sqrt();
    Ok((sigma, upper))
}

/// Mean-of-maximum calibration `C * max(sigma * sqrt(log d), R * log d)`.
/// `d` is accepted as a real so calibration points like `d = e` are exact.
pub fn expected_max_bound_bernstein(sigma: f64, r: f64, d: f64, c: f64) -> Result<f64> {
    require(sigma.is_finite() && sigma >= 0.0, "sigma must be nonnegative")?;
    require(r.is_finite() && r >= 0.0, "R must be nonnegative")?;
    require(d.is_finite() && d >= 1.0, "d must be at least 1")?;
    require(c.is_finite() && c > 0.0, "C must be positive")?;
    let log_d = d.ln();
    Ok(c * (sigma * log_d.sqrt()).max(r * log_d))
}

/// Mean-of-maximum calibration `C * max(mu_max, R * log d)` for psd sums.
pub fn expected_max_bound_chernoff(mu_max: f64, r: f64, d: f64, c: f64) -> Result<f64> {
    require(mu_max.is_finite() && mu_max >= 0.0, "mu_max must be nonnegative")?;
    require(r.is_finite() && r >= 0.0, "R must be nonnegative")?;
    require(d.is_finite() && d >= 1.0, "d must be at least 1")?;
    require(c.is_finite() && c > 0.0, "C must be positive")?;
    Ok(c * mu_max.max(r * d.ln()))
}

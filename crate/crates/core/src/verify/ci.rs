//! Exact (Clopper-Pearson) binomial confidence intervals. Conservative by
//! construction: coverage is at least the nominal level for every `p`.

use statrs::distribution::{Beta, ContinuousCDF};

use crate::error::{Error, Result};

/// Two-sided Clopper-Pearson interval for `successes` out of `trials` at the
/// given confidence level (e.g. 0.99). Endpoints come from Beta quantiles:
///
///   lower = BetaInv(alpha/2; k, n-k+1),  upper = BetaInv(1-alpha/2; k+1, n-k)
///
/// with the conventions `lower = 0` at `k = 0` and `upper = 1` at `k = n`.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::Domain("confidence interval needs trials >= 1".into()));
    }
    if successes > trials {
        return Err(Error::Domain(format!(
            "successes {successes} exceed trials {trials}"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain("confidence must lie in (0, 1)".into()));
    }
    let alpha = 1.0 - confidence;
    let k = successes as f64;
    let n = trials as f64;
    let lower = if successes == 0 {
        0.0
    } else {
        beta_quantile(k, n - k + 1.0, alpha / 2.0)?
    };
    let upper = if successes == trials {
        1.0
    } else {
        beta_quantile(k + 1.0, n - k, 1.0 - alpha / 2.0)?
    };
    Ok((lower, upper))
}

fn beta_quantile(a: f64, b: f64, p: f64) -> Result<f64> {
    let dist = Beta::new(a, b)
        .map_err(|e| Error::Domain(format!("beta({a}, {b}): {e}")))?;
    Ok(dist.inverse_cdf(p).clamp(0.0, 1.0))
}

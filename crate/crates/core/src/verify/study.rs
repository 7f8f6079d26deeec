//! Comparative studies: how the variance statistic relates to its coarser
//! and finer relatives, and how sampled mean norms sit inside the
//! `sigma .. sigma * sqrt(2 log(2ed))` bracket predicted for zero-mean
//! series.

use serde::{Deserialize, Serialize};

use crate::bounds::expected_norm_bracket;
use crate::ensembles::{sample_batch, EnsembleSpec};
use crate::error::{Error, Result};
use crate::linalg::{variance_parameter, weak_variance_estimate, MatrixFamily, VarianceMode};

/// Relative slack when asserting the ordering chain between variance
/// statistics; the quantities are exact up to eigensolver roundoff.
const CHAIN_TOL: f64 = 1e-9;

/// The three variance statistics of one coefficient family, and whether the
/// ordering `weak <= sigma2 <= summed-norms <= dim * sigma2` held.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarianceComparison {
    pub dim: usize,
    pub n_members: usize,
    /// `|| sum_k A_k^2 ||` — the statistic the tail curves use.
    pub sigma2: f64,
    /// `sum_k ||A_k^2||` — the coarser per-summand statistic; larger,
    /// sometimes by a factor of the family size.
    pub sigma2_aw: f64,
    /// Lower estimate of the weak variance `sup_{u,v} sum_k (u' A_k v)^2`.
    pub weak_estimate: f64,
    pub aw_over_sigma2: f64,
    pub chain_ok: bool,
}

/// Computes all three statistics for a self-adjoint family and checks the
/// ordering chain with slack [`CHAIN_TOL`].
pub fn variance_comparison(
    family: &MatrixFamily,
    restarts: u32,
    seed: u64,
) -> Result<VarianceComparison> {
    let members = family.as_self_adjoint()?;
    let dim = members[0].dim();
    let sigma2 = variance_parameter(family, VarianceMode::SelfAdjoint)?;
    let sigma2_aw = variance_parameter(family, VarianceMode::AhlswedeWinter)?;
    let weak_estimate = weak_variance_estimate(family, restarts, seed)?;
    let slack = CHAIN_TOL * sigma2.max(1.0);
    let chain_ok = weak_estimate <= sigma2 + slack
        && sigma2 <= sigma2_aw + slack
        && sigma2_aw <= dim as f64 * sigma2 + slack;
    Ok(VarianceComparison {
        dim,
        n_members: family.len(),
        sigma2,
        sigma2_aw,
        weak_estimate,
        aw_over_sigma2: sigma2_aw / sigma2,
        chain_ok,
    })
}

/// Monte Carlo summary of `||Y||` for a zero-mean series ensemble, checked
/// against the deterministic bracket
/// `sigma <= E||Y|| <= sigma * sqrt(2 log(2 e d))`
/// (the lower edge enters through `E||Y||^2 >= sigma^2`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeanNormStudy {
    pub tag: String,
    pub dim: usize,
    pub trials: usize,
    pub mean_norm: f64,
    pub stderr_norm: f64,
    pub mean_sq_norm: f64,
    pub stderr_sq_norm: f64,
    /// Variance statistic of the coefficient family.
    pub sigma2: f64,
    /// `sigma`, the deterministic floor for `E ||Y||`.
    pub lower_reference: f64,
    /// `sigma * sqrt(2 log(2 e d))`, the generic ceiling.
    pub upper_reference: f64,
    /// A structure-aware ceiling when one is known (`2 sqrt(d)` for the
    /// Gaussian orthogonal ensemble); tighter than the generic one.
    pub sharp_upper: Option<f64>,
    /// `mean_sq_norm + 3 stderr >= sigma2`.
    pub lower_ok: bool,
    /// `mean_norm - 3 stderr <= upper_reference`.
    pub upper_ok: bool,
}

/// Samples `trials` realizations and compares the observed mean norms with
/// the bracket computed from the coefficient family. Only series ensembles
/// (those with a deterministic coefficient family) are accepted.
pub fn mean_norm_study(spec: &EnsembleSpec, trials: usize, seed: u64) -> Result<MeanNormStudy> {
    spec.validate()?;
    if trials < 2 {
        return Err(Error::Domain("need at least 2 trials for a stderr".into()));
    }
    let family = spec.coefficient_family().ok_or_else(|| {
        Error::KindMismatch(format!(
            "{} has no coefficient family to compute sigma2 from",
            spec.tag()
        ))
    })?;
    let sigma2 = match &family {
        MatrixFamily::SelfAdjoint(_) => variance_parameter(&family, VarianceMode::SelfAdjoint)?,
        MatrixFamily::Rectangular(_) => variance_parameter(&family, VarianceMode::Rectangular)?,
    };
    let dim = spec.dim();

    let batch = sample_batch(spec, seed, 0, trials)?;
    let norms: Vec<f64> = batch
        .realizations
        .iter()
        .map(|y| y.spectral_norm())
        .collect();

    let (mean_norm, stderr_norm) = mean_and_stderr(&norms);
    let squares: Vec<f64> = norms.iter().map(|x| x * x).collect();
    let (mean_sq_norm, stderr_sq_norm) = mean_and_stderr(&squares);

    let (lower_reference, upper_reference) = expected_norm_bracket(sigma2, dim)?;
    let sharp_upper = match spec {
        EnsembleSpec::Goe { dim } => Some(2.0 * (*dim as f64).sqrt()),
        _ => None,
    };

    Ok(MeanNormStudy {
        tag: spec.tag().to_string(),
        dim,
        trials,
        mean_norm,
        stderr_norm,
        mean_sq_norm,
        stderr_sq_norm,
        sigma2,
        lower_reference,
        upper_reference,
        sharp_upper,
        lower_ok: mean_sq_norm + 3.0 * stderr_sq_norm >= sigma2,
        upper_ok: mean_norm - 3.0 * stderr_norm <= upper_reference,
    })
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

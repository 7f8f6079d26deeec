//! Random matrix ensembles: structured sums `Y = sum_k X_k` drawn from a
//! declarative spec. Sampling is keyed per `(seed, trial, summand)`, so a
//! realization is a pure function of those three numbers regardless of
//! execution order, and enumerable ensembles expose their exact finite
//! support for brute-force expectations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{MatrixFamily, RectMatrix, SymMatrix};
use crate::rng::KeyedStream;

/// Cap on the joint support size accepted by [`EnsembleSpec::enumerate_support`].
pub const SUPPORT_CAP: u64 = 1 << 20;

/// Probabilities of one summand's support must sum to 1 within this slack.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Declarative description of a random matrix sum.
///
/// Serialized with a `"tag"` discriminator, e.g.
/// `{"tag": "goe", "dim": 32}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum EnsembleSpec {
    /// `sum_k g_k A_k` with independent standard normal `g_k`.
    GaussianSeries { coefficients: MatrixFamily },
    /// `sum_k e_k A_k` with independent fair signs `e_k`.
    RademacherSeries { coefficients: MatrixFamily },
    /// Entrywise-scaled Gaussian rectangle `G .* base`, presented as its
    /// self-adjoint dilation so every statistic sees `||G .* base||`.
    NonuniformGaussian { base: RectMatrix },
    /// `sum_{j <= k} g_jk (E_jk + E_kj)`: the unnormalized Gaussian
    /// orthogonal ensemble. Diagonal cells carry coefficient `2 E_jj`.
    Goe { dim: usize },
    /// `sum_j g_j E_jj`: independent standard normal diagonal.
    DiagGaussian { dim: usize },
    /// `n_summands` independent draws of `E_JJ` with `J` uniform; the sum
    /// counts how often each diagonal cell was collected.
    Coupon { dim: usize, n_summands: usize },
    /// `n_summands` independent rank-one projectors `u u^T` with `u`
    /// uniform on the sphere. Each summand is a psd contraction with
    /// mean `I / dim`.
    RankOnePsd { dim: usize, n_summands: usize },
    /// `e_k A_k` with fair signs: identical in law to `RademacherSeries`,
    /// tagged separately because it is used where `X_k^2 = A_k^2` matters.
    SignModulated { coefficients: MatrixFamily },
    /// Explicit finite support per summand: outcome lists with
    /// probabilities summing to 1.
    FiniteSupport { summands: Vec<Vec<(SymMatrix, f64)>> },
}

impl EnsembleSpec {
    /// Dimension of a realization.
    pub fn dim(&self) -> usize {
        match self {
            EnsembleSpec::GaussianSeries { coefficients }
            | EnsembleSpec::RademacherSeries { coefficients }
            | EnsembleSpec::SignModulated { coefficients } => coefficients.member_shape().0,
            EnsembleSpec::NonuniformGaussian { base } => base.rows() + base.cols(),
            EnsembleSpec::Goe { dim }
            | EnsembleSpec::DiagGaussian { dim }
            | EnsembleSpec::Coupon { dim, .. }
            | EnsembleSpec::RankOnePsd { dim, .. } => *dim,
            EnsembleSpec::FiniteSupport { summands } => summands
                .first()
                .and_then(|s| s.first())
                .map(|(m, _)| m.dim())
                .unwrap_or(0),
        }
    }

    /// Number of independent summands in the sum.
    pub fn n_summands(&self) -> usize {
        match self {
            EnsembleSpec::GaussianSeries { coefficients }
            | EnsembleSpec::RademacherSeries { coefficients }
            | EnsembleSpec::SignModulated { coefficients } => coefficients.len(),
            EnsembleSpec::NonuniformGaussian { base } => base.rows() * base.cols(),
            EnsembleSpec::Goe { dim } => dim * (dim + 1) / 2,
            EnsembleSpec::DiagGaussian { dim } => *dim,
            EnsembleSpec::Coupon { n_summands, .. }
            | EnsembleSpec::RankOnePsd { n_summands, .. } => *n_summands,
            EnsembleSpec::FiniteSupport { summands } => summands.len(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            EnsembleSpec::GaussianSeries { .. } => "gaussian_series",
            EnsembleSpec::RademacherSeries { .. } => "rademacher_series",
            EnsembleSpec::NonuniformGaussian { .. } => "nonuniform_gaussian",
            EnsembleSpec::Goe { .. } => "goe",
            EnsembleSpec::DiagGaussian { .. } => "diag_gaussian",
            EnsembleSpec::Coupon { .. } => "coupon",
            EnsembleSpec::RankOnePsd { .. } => "rank_one_psd",
            EnsembleSpec::SignModulated { .. } => "sign_modulated",
            EnsembleSpec::FiniteSupport { .. } => "finite_support",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EnsembleSpec::GaussianSeries { coefficients }
            | EnsembleSpec::RademacherSeries { coefficients }
            | EnsembleSpec::SignModulated { coefficients } => {
                coefficients.as_self_adjoint().map_err(|_| {
                    Error::SpecInvalid(format!(
                        "{} needs a self-adjoint coefficient family",
                        self.tag()
                    ))
                })?;
                Ok(())
            }
            EnsembleSpec::NonuniformGaussian { base } => {
                if base.max_abs() == 0.0 {
                    return Err(Error::SpecInvalid(
                        "nonuniform_gaussian base matrix is identically zero".into(),
                    ));
                }
                Ok(())
            }
            EnsembleSpec::Goe { dim } | EnsembleSpec::DiagGaussian { dim } => {
                if *dim == 0 {
                    return Err(Error::SpecInvalid("dimension must be positive".into()));
                }
                Ok(())
            }
            EnsembleSpec::Coupon { dim, n_summands }
            | EnsembleSpec::RankOnePsd { dim, n_summands } => {
                if *dim == 0 || *n_summands == 0 {
                    return Err(Error::SpecInvalid(
                        "dimension and summand count must be positive".into(),
                    ));
                }
                Ok(())
            }
            EnsembleSpec::FiniteSupport { summands } => {
                if summands.is_empty() {
                    return Err(Error::SpecInvalid("no summands".into()));
                }
                let dim = self.dim();
                for (k, support) in summands.iter().enumerate() {
                    if support.is_empty() {
                        return Err(Error::SpecInvalid(format!(
                            "summand {k} has an empty support"
                        )));
                    }
                    let mut total = 0.0;
                    for (outcome, p) in support {
                        if outcome.dim() != dim {
                            return Err(Error::SpecInvalid(format!(
                                "summand {k} mixes dimensions {} and {dim}",
                                outcome.dim()
                            )));
                        }
                        if !(p.is_finite() && *p >= 0.0) {
                            return Err(Error::SpecInvalid(format!(
                                "summand {k} has a negative or non-finite probability"
                            )));
                        }
                        total += p;
                    }
                    if (total - 1.0).abs() > PROB_SUM_TOL {
                        return Err(Error::SpecInvalid(format!(
                            "summand {k} probabilities sum to {total}, not 1"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// One realization `Y = sum_k X_k`. Bitwise deterministic in
    /// `(self, seed, trial)`; summand `k` reads only the stream keyed
    /// `(seed, trial, k)`, so trials and summands are order-independent.
    pub fn sample_sum(&self, seed: u64, trial: u64) -> Result<SymMatrix> {
        self.validate()?;
        Ok(self.sample_sum_unchecked(seed, trial))
    }

    pub(crate) fn sample_sum_unchecked(&self, seed: u64, trial: u64) -> SymMatrix {
        match self {
            EnsembleSpec::GaussianSeries { coefficients } => {
                let members = coefficients.as_self_adjoint().expect("validated");
                let mut sum = SymMatrix::zero(members[0].dim());
                for (k, a) in members.iter().enumerate() {
                    let g = KeyedStream::new(seed, trial, k as u64).standard_normal();
                    sum.accumulate(a, g);
                }
                sum
            }
            EnsembleSpec::RademacherSeries { coefficients }
            | EnsembleSpec::SignModulated { coefficients } => {
                let members = coefficients.as_self_adjoint().expect("validated");
                let mut sum = SymMatrix::zero(members[0].dim());
                for (k, a) in members.iter().enumerate() {
                    let e = KeyedStream::new(seed, trial, k as u64).rademacher();
                    sum.accumulate(a, e);
                }
                sum
            }
            EnsembleSpec::NonuniformGaussian { base } => {
                let (r, c) = (base.rows(), base.cols());
                let mut scaled = RectMatrix::zero(r, c);
                for i in 0..r {
                    for j in 0..c {
                        let b = base.get(i, j);
                        if b == 0.0 {
                            continue;
                        }
                        let k = (i * c + j) as u64;
                        let g = KeyedStream::new(seed, trial, k).standard_normal();
                        scaled.set(i, j, g * b);
                    }
                }
                crate::linalg::dilation(&scaled)
            }
            EnsembleSpec::Goe { dim } => {
                let d = *dim;
                let mut m = SymMatrix::zero(d);
                let mut k = 0u64;
                for j in 0..d {
                    for l in j..d {
                        let g = KeyedStream::new(seed, trial, k).standard_normal();
                        k += 1;
                        if j == l {
                            // coefficient E_jj + E_jj
                            m.set_sym(j, j, m.get(j, j) + 2.0 * g);
                        } else {
                            m.set_sym(j, l, m.get(j, l) + g);
                        }
                    }
                }
                m
            }
            EnsembleSpec::DiagGaussian { dim } => {
                let d = *dim;
                let mut m = SymMatrix::zero(d);
                for j in 0..d {
                    let g = KeyedStream::new(seed, trial, j as u64).standard_normal();
                    m.set_sym(j, j, g);
                }
                m
            }
            EnsembleSpec::Coupon { dim, n_summands } => {
                let d = *dim;
                let mut m = SymMatrix::zero(d);
                for k in 0..*n_summands {
                    let j = KeyedStream::new(seed, trial, k as u64).index(d);
                    m.set_sym(j, j, m.get(j, j) + 1.0);
                }
                m
            }
            EnsembleSpec::RankOnePsd { dim, n_summands } => {
                let d = *dim;
                let mut m = SymMatrix::zero(d);
                for k in 0..*n_summands {
                    let u = KeyedStream::new(seed, trial, k as u64).unit_vector(d);
                    for i in 0..d {
                        for j in i..d {
                            let v = m.get(i, j) + u[i] * u[j];
                            m.set_sym(i, j, v);
                        }
                    }
                }
                m
            }
            EnsembleSpec::FiniteSupport { summands } => {
                let d = self.dim();
                let mut sum = SymMatrix::zero(d);
                for (k, support) in summands.iter().enumerate() {
                    let u = KeyedStream::new(seed, trial, k as u64).uniform_01();
                    let mut acc = 0.0;
                    let mut chosen = support.len() - 1;
                    for (idx, (_, p)) in support.iter().enumerate() {
                        acc += p;
                        if u < acc {
                            chosen = idx;
                            break;
                        }
                    }
                    sum.accumulate(&support[chosen].0, 1.0);
                }
                sum
            }
        }
    }

    /// The deterministic coefficient family `{A_k}` for zero-mean series
    /// ensembles (the matrices multiplied by the scalar noise), or `None`
    /// when the ensemble is not a coefficient series.
    pub fn coefficient_family(&self) -> Option<MatrixFamily> {
        match self {
            EnsembleSpec::GaussianSeries { coefficients }
            | EnsembleSpec::RademacherSeries { coefficients }
            | EnsembleSpec::SignModulated { coefficients } => Some(coefficients.clone()),
            EnsembleSpec::DiagGaussian { dim } => {
                let members = (0..*dim)
                    .map(|j| {
                        let mut m = SymMatrix::zero(*dim);
                        m.set_sym(j, j, 1.0);
                        m
                    })
                    .collect();
                MatrixFamily::self_adjoint(members).ok()
            }
            EnsembleSpec::Goe { dim } => {
                let d = *dim;
                let mut members = Vec::with_capacity(d * (d + 1) / 2);
                for j in 0..d {
                    for l in j..d {
                        let mut m = SymMatrix::zero(d);
                        if j == l {
                            m.set_sym(j, j, 2.0);
                        } else {
                            m.set_sym(j, l, 1.0);
                        }
                        members.push(m);
                    }
                }
                MatrixFamily::self_adjoint(members).ok()
            }
            EnsembleSpec::NonuniformGaussian { base } => {
                nonuniform_decompose(base).ok().map(|d| d.summands)
            }
            _ => None,
        }
    }

    /// `E X_k` where it is a fixed known matrix shared by all summands.
    pub fn expected_summand(&self) -> Option<SymMatrix> {
        match self {
            EnsembleSpec::Coupon { dim, .. } | EnsembleSpec::RankOnePsd { dim, .. } => {
                Some(SymMatrix::scaled_identity(*dim, 1.0 / *dim as f64))
            }
            _ => None,
        }
    }

    /// Per-summand supports for enumerable ensembles.
    pub fn per_summand_support(&self) -> Result<Vec<Vec<(SymMatrix, f64)>>> {
        self.validate()?;
        match self {
            EnsembleSpec::RademacherSeries { coefficients }
            | EnsembleSpec::SignModulated { coefficients } => {
                let members = coefficients.as_self_adjoint()?;
                Ok(members
                    .iter()
                    .map(|a| vec![(a.clone(), 0.5), (a.scale(-1.0), 0.5)])
                    .collect())
            }
            EnsembleSpec::Coupon { dim, n_summands } => {
                let d = *dim;
                let support: Vec<(SymMatrix, f64)> = (0..d)
                    .map(|j| {
                        let mut m = SymMatrix::zero(d);
                        m.set_sym(j, j, 1.0);
                        (m, 1.0 / d as f64)
                    })
                    .collect();
                Ok(vec![support; *n_summands])
            }
            EnsembleSpec::FiniteSupport { summands } => Ok(summands.clone()),
            _ => Err(Error::NotEnumerable),
        }
    }

    /// Exact distribution of `Y = sum_k X_k` as `(outcome, probability)`
    /// pairs, one per point of the joint support (not deduplicated).
    /// Refuses when the product of support sizes exceeds `cap`.
    pub fn enumerate_support(&self, cap: u64) -> Result<Vec<(SymMatrix, f64)>> {
        let per = self.per_summand_support()?;
        let mut total: u128 = 1;
        for s in &per {
            total = total.saturating_mul(s.len() as u128);
            if total > cap as u128 {
                return Err(Error::SupportTooLarge { size: total, cap });
            }
        }
        let d = self.dim();
        let n = per.len();
        let mut out = Vec::with_capacity(total as usize);
        let mut idx = vec![0usize; n];
        loop {
            let mut sum = SymMatrix::zero(d);
            let mut p = 1.0;
            for (k, &i) in idx.iter().enumerate() {
                let (m, q) = &per[k][i];
                sum.accumulate(m, 1.0);
                p *= q;
            }
            out.push((sum, p));
            // mixed-radix increment
            let mut k = 0;
            loop {
                if k == n {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < per[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// A batch of realizations, trials `trial_start .. trial_start + len`.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub spec: EnsembleSpec,
    pub seed: u64,
    pub trial_start: u64,
    pub realizations: Vec<SymMatrix>,
}

/// Samples `count` trials in parallel. Entry `i` is exactly
/// `spec.sample_sum(seed, trial_start + i)`; the parallel schedule cannot
/// change any value because each trial owns its keyed streams.
pub fn sample_batch(
    spec: &EnsembleSpec,
    seed: u64,
    trial_start: u64,
    count: usize,
) -> Result<SampleBatch> {
    spec.validate()?;
    let realizations: Vec<SymMatrix> = (0..count)
        .into_par_iter()
        .map(|i| spec.sample_sum_unchecked(seed, trial_start + i as u64))
        .collect();
    Ok(SampleBatch {
        spec: spec.clone(),
        seed,
        trial_start,
        realizations,
    })
}

/// Entrywise decomposition of a rectangular Gaussian shape: the summand
/// family `{b_jk E_jk : b_jk != 0}` and the variance
/// `sigma2 = max( max_j sum_k b_jk^2 , max_k sum_j b_jk^2 )`,
/// i.e. the larger of the biggest squared row and column norms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonuniformDecomposition {
    pub summands: MatrixFamily,
    pub sigma2: f64,
    pub row_norms_sq: Vec<f64>,
    pub col_norms_sq: Vec<f64>,
}

pub fn nonuniform_decompose(base: &RectMatrix) -> Result<NonuniformDecomposition> {
    let (r, c) = (base.rows(), base.cols());
    let mut row_norms_sq = vec![0.0; r];
    let mut col_norms_sq = vec![0.0; c];
    let mut members = Vec::new();
    for i in 0..r {
        for j in 0..c {
            let b = base.get(i, j);
            if b == 0.0 {
                continue;
            }
            row_norms_sq[i] += b * b;
            col_norms_sq[j] += b * b;
            let mut m = RectMatrix::zero(r, c);
            m.set(i, j, b);
            members.push(m);
        }
    }
    if members.is_empty() {
        return Err(Error::SpecInvalid(
            "base matrix is identically zero".into(),
        ));
    }
    let max_row = row_norms_sq.iter().cloned().fold(0.0f64, f64::max);
    let max_col = col_norms_sq.iter().cloned().fold(0.0f64, f64::max);
    Ok(NonuniformDecomposition {
        summands: MatrixFamily::rectangular(members)?,
        sigma2: max_row.max(max_col),
        row_norms_sq,
        col_norms_sq,
    })
}

//! Verification layer: Monte Carlo tail estimation with exact binomial
//! confidence intervals, dominance checks of empirical tails against bound
//! curves, exact finite-support lemma checks, and comparison studies.

pub mod ci;
pub mod khintchine;
pub mod lemmas;
pub mod oracle;
pub mod quadrature;
pub mod study;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundCurve;
use crate::ensembles::EnsembleSpec;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

pub use ci::clopper_pearson;
pub use khintchine::{khintchine_check, KhintchineRow};
pub use lemmas::{lemma_suite, LemmaVerdict, LEMMA_IDS};
pub use study::{mean_norm_study, variance_comparison, MeanNormStudy, VarianceComparison};

/// Confidence level used for all tail intervals.
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// Fewer trials than this cannot produce a useful exact interval.
pub const MIN_TRIALS: u64 = 100;

/// Scalar statistic extracted from each realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    LambdaMax,
    LambdaMin,
    SpectralNorm,
}

impl Statistic {
    pub fn evaluate(self, m: &SymMatrix) -> f64 {
        let ext = m.extremes();
        match self {
            Statistic::LambdaMax => ext.lambda_max,
            Statistic::LambdaMin => ext.lambda_min,
            Statistic::SpectralNorm => ext.spectral_norm,
        }
    }

    /// Tail direction: `lambda_max` and the norm measure `P(stat >= t)`;
    /// `lambda_min` measures the lower tail `P(stat <= t)`.
    pub fn is_upper_tail(self) -> bool {
        !matches!(self, Statistic::LambdaMin)
    }

    pub fn label(self) -> &'static str {
        match self {
            Statistic::LambdaMax => "lambda_max",
            Statistic::LambdaMin => "lambda_min",
            Statistic::SpectralNorm => "spectral_norm",
        }
    }
}

/// Empirical tail curve with exact 99% binomial confidence bands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailReport {
    pub spec: EnsembleSpec,
    pub statistic: Statistic,
    pub seed: u64,
    pub trials: u64,
    pub confidence: f64,
    pub t_grid: Vec<f64>,
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
}

/// Estimates `P(statistic(Y) >= t)` (or `<= t` for `lambda_min`) on a grid.
/// Trials are sampled in parallel but keyed individually, so the report is a
/// pure function of `(spec, statistic, t_grid, trials, seed)`.
pub fn monte_carlo_tail(
    spec: &EnsembleSpec,
    statistic: Statistic,
    t_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<TailReport> {
    spec.validate()?;
    if trials < MIN_TRIALS {
        return Err(Error::Domain(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    if t_grid.is_empty() {
        return Err(Error::Domain("threshold grid is empty".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("threshold grid has non-finite entries".into()));
    }
    if t_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Domain("threshold grid must be ascending".into()));
    }

    let stats: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| statistic.evaluate(&spec.sample_sum_unchecked(seed, trial)))
        .collect();

    let upper = statistic.is_upper_tail();
    let counts: Vec<u64> = t_grid
        .iter()
        .map(|&t| {
            stats
                .iter()
                .filter(|&&s| if upper { s >= t } else { s <= t })
                .count() as u64
        })
        .collect();

    let mut empirical = Vec::with_capacity(counts.len());
    let mut ci_low = Vec::with_capacity(counts.len());
    let mut ci_high = Vec::with_capacity(counts.len());
    for &k in &counts {
        empirical.push(k as f64 / trials as f64);
        let (lo, hi) = clopper_pearson(k, trials, DEFAULT_CONFIDENCE)?;
        ci_low.push(lo);
        ci_high.push(hi);
    }

    Ok(TailReport {
        spec: spec.clone(),
        statistic,
        seed,
        trials,
        confidence: DEFAULT_CONFIDENCE,
        t_grid: t_grid.to_vec(),
        counts,
        empirical,
        ci_low,
        ci_high,
    })
}

/// One grid point of a dominance comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominancePoint {
    pub t: f64,
    pub empirical: f64,
    pub ci_low: f64,
    pub bound: f64,
    /// `ci_low <= bound`: the bound is statistically consistent here.
    pub pass: bool,
}

/// Pointwise verdicts of an empirical tail against a bound curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominanceReport {
    pub curve_label: String,
    pub points: Vec<DominancePoint>,
    pub pass: bool,
}

/// Checks that the bound curve dominates the empirical tail: at every grid
/// point the lower confidence limit must not exceed the raw bound value.
/// The curve must have been evaluated on the identical grid.
pub fn check_dominance(report: &TailReport, curve: &BoundCurve) -> Result<DominanceReport> {
    if report.t_grid != curve.t_grid {
        return Err(Error::GridMismatch(format!(
            "report grid ({} points) differs from curve grid ({} points)",
            report.t_grid.len(),
            curve.t_grid.len()
        )));
    }
    let points: Vec<DominancePoint> = report
        .t_grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let pass = report.ci_low[i] <= curve.values[i];
            DominancePoint {
                t,
                empirical: report.empirical[i],
                ci_low: report.ci_low[i],
                bound: curve.values[i],
                pass,
            }
        })
        .collect();
    let pass = points.iter().all(|p| p.pass);
    Ok(DominanceReport {
        curve_label: curve.label.clone(),
        points,
        pass,
    })
}

/// CSV rendering of a tail report, optionally joined with a bound curve on
/// the same grid. Columns: `t, empirical, ci_low, ci_high, bound_raw,
/// bound_clipped`; the bound cells are empty when no curve is given.
pub fn tail_csv(report: &TailReport, curve: Option<&BoundCurve>) -> Result<String> {
    if let Some(c) = curve {
        if c.t_grid != report.t_grid {
            return Err(Error::GridMismatch(
                "curve grid differs from report grid".into(),
            ));
        }
    }
    let mut out = String::from("t,empirical,ci_low,ci_high,bound_raw,bound_clipped\n");
    for i in 0..report.t_grid.len() {
        let (raw, clipped) = match curve {
            Some(c) => (format!("{}", c.values[i]), format!("{}", c.clipped[i])),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            report.t_grid[i],
            report.empirical[i],
            report.ci_low[i],
            report.ci_high[i],
            raw,
            clipped
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{curve::params, BoundCurve};
    use crate::linalg::MatrixFamily;

    fn two_point_spec() -> EnsembleSpec {
        // Y = e * diag(1, -1): lambda_max = 1 always.
        let fam = MatrixFamily::self_adjoint(vec![SymMatrix::diag(&[1.0, -1.0])]).unwrap();
        EnsembleSpec::RademacherSeries { coefficients: fam }
    }

    #[test]
    fn deterministic_tail_has_exact_steps() {
        let spec = two_point_spec();
        let grid = vec![0.0, 0.5, 1.0, 1.5];
        let report =
            monte_carlo_tail(&spec, Statistic::LambdaMax, &grid, 200, 9).unwrap();
        // lambda_max = 1 in every trial: tail is 1 up to t = 1, then 0
        assert_eq!(report.empirical, vec![1.0, 1.0, 1.0, 0.0]);
        assert!(report.ci_low[0] > 0.97);
        assert_eq!(report.ci_low[3], 0.0);
        // empirical nonincreasing for an upper-tail statistic
        for w in report.empirical.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn lambda_min_measures_the_lower_tail() {
        let spec = EnsembleSpec::Coupon { dim: 2, n_summands: 1 };
        let grid = vec![0.0, 2.0];
        let report =
            monte_carlo_tail(&spec, Statistic::LambdaMin, &grid, 150, 3).unwrap();
        // with one draw over two cells, one diagonal entry is always zero
        assert_eq!(report.empirical[0], 1.0);
        assert_eq!(report.empirical[1], 1.0);
    }

    #[test]
    fn reports_are_reproducible() {
        let spec = EnsembleSpec::Goe { dim: 3 };
        let grid = vec![0.0, 1.0, 2.0, 4.0];
        let a = monte_carlo_tail(&spec, Statistic::SpectralNorm, &grid, 300, 17).unwrap();
        let b = monte_carlo_tail(&spec, Statistic::SpectralNorm, &grid, 300, 17).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.ci_low, b.ci_low);
    }

    #[test]
    fn dominance_flags_an_impossible_bound() {
        let spec = two_point_spec();
        let grid = vec![0.0, 0.5, 1.0];
        let report =
            monte_carlo_tail(&spec, Statistic::LambdaMax, &grid, 500, 4).unwrap();
        let generous = BoundCurve::from_fn("generous", params(&[]), grid.clone(), |_| Ok(2.0))
            .unwrap();
        assert!(check_dominance(&report, &generous).unwrap().pass);
        let impossible =
            BoundCurve::from_fn("impossible", params(&[]), grid.clone(), |_| Ok(0.5)).unwrap();
        let verdict = check_dominance(&report, &impossible).unwrap();
        assert!(!verdict.pass);
        // the t = 1.0 point fails: empirical tail is 1 there
        assert!(!verdict.points[2].pass);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let spec = two_point_spec();
        let report =
            monte_carlo_tail(&spec, Statistic::LambdaMax, &[0.0, 1.0], 100, 1).unwrap();
        let other = BoundCurve::from_fn("other", params(&[]), vec![0.0, 2.0], |_| Ok(1.0))
            .unwrap();
        assert!(matches!(
            check_dominance(&report, &other),
            Err(Error::GridMismatch(_))
        ));
        assert!(matches!(
            tail_csv(&report, Some(&other)),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn csv_has_the_fixed_header_and_optional_bounds() {
        let spec = two_point_spec();
        let grid = vec![0.0, 1.0];
        let report =
            monte_carlo_tail(&spec, Statistic::LambdaMax, &grid, 100, 1).unwrap();
        let bare = tail_csv(&report, None).unwrap();
        assert!(bare.starts_with("t,empirical,ci_low,ci_high,bound_raw,bound_clipped\n"));
        assert!(bare.lines().nth(1).unwrap().ends_with(",,"));
        let curve =
            BoundCurve::from_fn("c", params(&[]), grid.clone(), |t| Ok(2.0 * (-t).exp()))
                .unwrap();
        let joined = tail_csv(&report, Some(&curve)).unwrap();
        assert!(joined.lines().nth(1).unwrap().contains(",2,"));
    }

    #[test]
    fn trial_floor_and_grid_validation() {
        let spec = two_point_spec();
        assert!(monte_carlo_tail(&spec, Statistic::LambdaMax, &[0.0], 50, 1).is_err());
        assert!(monte_carlo_tail(&spec, Statistic::LambdaMax, &[], 200, 1).is_err());
        assert!(
            monte_carlo_tail(&spec, Statistic::LambdaMax, &[1.0, 0.0], 200, 1).is_err()
        );
    }
}

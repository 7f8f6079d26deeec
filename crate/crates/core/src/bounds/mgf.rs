//! Matrix mgf dominators and the numeric master bound.
//!
//! A model pairs a scalar rate `g(theta)` with a psd shape matrix `M` such
//! that `log E exp(theta X) <= g(theta) * M` on the kind's theta domain.
//! Summing these dominators over independent summands and optimizing
//!
//!   bound(t) = inf_theta exp(-theta t) * tr exp( sum_k g_k(theta) M_k )
//!
//! reproduces every closed-form curve in this crate as a special case.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// theta search window; the optimizer never evaluates outside
/// `[THETA_FLOOR, THETA_CAP]` intersected with the kinds' domains.
pub const THETA_FLOOR: f64 = 1e-6;
pub const THETA_CAP: f64 = 50.0;

/// Relative width at which golden-section refinement stops.
pub const THETA_REL_WIDTH: f64 = 1e-10;

/// Number of log-spaced probe points before refinement.
const GRID_POINTS: usize = 64;

/// Shape-matrix psd slack: `lambda_min >= -1e-9 * max(1, lambda_max)`.
const SHAPE_PSD_TOL: f64 = 1e-9;

/// Scalar mgf rate families. Each kind fixes `g` and its theta domain;
/// the shape matrix carries the summand's size information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MgfKind {
    /// `g(theta) = theta^2 / 2` on `theta > 0`; shape `A_k^2`. Exact
    /// (equality, not just domination) for Gaussian coefficients.
    Gaussian,
    /// Same rate as `Gaussian`; kept distinct for labeling sign series.
    Rademacher,
    /// `g(theta) = e^theta - 1` on `theta > 0`; shape `E X_k` (psd summands).
    Chernoff,
    /// `g(theta) = e^theta - theta - 1` on `theta > 0`; shape `E X_k^2`,
    /// summands rescaled so `lambda_max(X_k) <= 1`.
    BernsteinBounded,
    /// `g(theta) = theta^2 / (2 (1 - theta))` on `0 < theta < 1`; shape
    /// `A_k^2` from the moment-growth hypothesis, rescaled so `R = 1`.
    BernsteinSubexp,
    /// `g(theta) = 2 theta^2` on `theta > 0`; shape `A_k^2` dominating the
    /// conditional squares of a martingale difference sequence.
    Azuma,
}

impl MgfKind {
    pub fn rate(self, theta: f64) -> f64 {
        match self {
            MgfKind::Gaussian | MgfKind::Rademacher => 0.5 * theta * theta,
            MgfKind::Chernoff => theta.exp_m1(),
            MgfKind::BernsteinBounded => theta.exp_m1() - theta,
            MgfKind::BernsteinSubexp => theta * theta / (2.0 * (1.0 - theta)),
            MgfKind::Azuma => 2.0 * theta * theta,
        }
    }

    /// Open interval on which the rate is a valid dominator.
    pub fn theta_domain(self) -> (f64, f64) {
        match self {
            MgfKind::BernsteinSubexp => (0.0, 1.0),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MgfKind::Gaussian => "gaussian",
            MgfKind::Rademacher => "rademacher",
            MgfKind::Chernoff => "chernoff",
            MgfKind::BernsteinBounded => "bernstein_bounded",
            MgfKind::BernsteinSubexp => "bernstein_subexp",
            MgfKind::Azuma => "azuma",
        }
    }
}

/// One summand's mgf dominator: `log E exp(theta X) <= rate(theta) * shape`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MgfModel {
    pub kind: MgfKind,
    shape: SymMatrix,
}

impl MgfModel {
    /// Validates that the shape is psd up to a small slack; a dominator with
    /// a genuinely negative direction would certify nothing.
    pub fn new(kind: MgfKind, shape: SymMatrix) -> Result<Self> {
        let ext = shape.extremes();
        let tol = SHAPE_PSD_TOL * ext.lambda_max.max(1.0);
        if ext.lambda_min < -tol {
            return Err(Error::Domain(format!(
                "shape matrix must be psd: lambda_min = {:e}",
                ext.lambda_min
            )));
        }
        Ok(MgfModel { kind, shape })
    }

    pub fn shape(&self) -> &SymMatrix {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    /// `rate(theta) * shape`, the matrix upper bound on `log E exp(theta X)`.
    pub fn log_mgf_bound(&self, theta: f64) -> Result<SymMatrix> {
        let (lo, hi) = self.kind.theta_domain();
        if !(theta > lo && theta < hi) {
            return Err(Error::ThetaOutOfDomain { theta, lo, hi });
        }
        Ok(self.shape.scale(self.kind.rate(theta)))
    }
}

/// `log( exp(-theta t) * tr exp(sum_k g_k(theta) M_k) )`, evaluated through
/// the eigenvalues so that huge exponents cannot overflow prematurely.
fn log_objective(kind_sums: &[(MgfKind, SymMatrix)], t: f64, theta: f64) -> f64 {
    let dim = kind_sums[0].1.dim();
    let mut total = SymMatrix::zero(dim);
    for (kind, sum) in kind_sums {
        total = total
            .add_scaled(sum, kind.rate(theta))
            .expect("kind sums share one dimension");
    }
    let eigs = total.eigen().values;
    // log sum exp over eigenvalues
    let m = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + eigs.iter().map(|l| (l - m).exp()).sum::<f64>().ln();
    -theta * t + lse
}

/// Numeric master tail bound: probes a 64-point log grid over the feasible
/// theta window, then golden-section refines around the best probe to
/// relative width 1e-10. Returns `(bound, theta_star)`.
pub fn master_tail_numeric(models: &[MgfModel], t: f64, d: usize) -> Result<(f64, f64)> {
    if models.is_empty() {
        return Err(Error::Domain("need at least one mgf model".into()));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain("threshold t must be nonnegative".into()));
    }
    for m in models {
        if m.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "model dimension {} does not match requested dimension {d}",
                m.dim()
            )));
        }
    }

    // Intersect the kinds' domains with the search window. Open upper ends
    // are pulled strictly inside so rates stay finite.
    let lo = THETA_FLOOR;
    let mut hi = THETA_CAP;
    for m in models {
        let (_, kind_hi) = m.kind.theta_domain();
        if kind_hi.is_finite() {
            hi = hi.min(kind_hi * (1.0 - 1e-9));
        }
    }
    if !(lo < hi) {
        return Err(Error::EmptyDomain(format!(
            "theta window is empty: [{lo}, {hi}]"
        )));
    }

    // Group models by kind once; each objective evaluation then performs a
    // single matrix assembly per kind instead of per summand.
    let mut sums: Vec<(MgfKind, SymMatrix)> = Vec::new();
    for m in models {
        match sums.iter_mut().find(|(k, _)| *k == m.kind) {
            Some((_, s)) => *s = s.add(&m.shape)?,
            None => sums.push((m.kind, m.shape.clone())),
        }
    }

    let f = |theta: f64| log_objective(&sums, t, theta);

    let ratio = (hi / lo).powf(1.0 / (GRID_POINTS as f64 - 1.0));
    let mut best_idx = 0;
    let mut best_val = f64::INFINITY;
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| lo * ratio.powi(i as i32))
        .collect();
    for (i, &theta) in grid.iter().enumerate() {
        let v = f(theta);
        if v < best_val {
            best_val = v;
            best_idx = i;
        }
    }

    let a = grid[best_idx.saturating_sub(1)];
    let b = grid[(best_idx + 1).min(GRID_POINTS - 1)];
    let (theta_star, log_bound) = golden_section_min(&f, a, b, THETA_REL_WIDTH);
    Ok((log_bound.exp(), theta_star))
}

/// Golden-section minimization of a unimodal function on `[a, b]`, stopping
/// when the bracket width falls below `rel_width` relative to its location.
/// Returns `(x_min, f(x_min))`.
pub fn golden_section_min(
    f: &dyn Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    rel_width: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a) <= rel_width * b.abs().max(1e-300) {
            break;
        }
        if fc <= fd {
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
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Convenience: one model per family member with the member itself (for
/// expectation-shaped kinds) or its square (for coefficient-shaped kinds).
pub fn models_from_members(
    kind: MgfKind,
    members: &[SymMatrix],
) -> Result<Vec<MgfModel>> {
    members
        .iter()
        .map(|a| {
            let shape = match kind {
                MgfKind::Gaussian
                | MgfKind::Rademacher
                | MgfKind::Azuma
                | MgfKind::BernsteinSubexp => a.square(),
                MgfKind::Chernoff | MgfKind::BernsteinBounded => a.clone(),
            };
            MgfModel::new(kind, shape)
        })
        .collect()
}

/// Serializable summary of an optimized master bound (used in reports).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MasterBoundPoint {
    pub t: f64,
    pub bound: f64,
    pub theta_star: f64,
    pub parameters: BTreeMap<String, f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;

    fn close(a: f64, b: f64, rel: f64) {
        let scale = b.abs().max(1e-300);
        assert!((a - b).abs() <= rel * scale, "{a} vs {b} (rel {rel})");
    }

    #[test]
    fn gaussian_master_matches_closed_form() {
        // sum of shapes = sigma2 * I makes the closed form exact:
        // min_theta exp(-theta t + theta^2 sigma2 / 2) at theta = t / sigma2.
        let sigma2 = 1.0;
        let d = 2;
        let model = MgfModel::new(
            MgfKind::Gaussian,
            SymMatrix::scaled_identity(d, sigma2),
        )
        .unwrap();
        for &t in &[0.5, 1.0, 2.0, 3.5] {
            let (bound, theta) = master_tail_numeric(&[model.clone()], t, d).unwrap();
            let closed = bounds::gaussian_series_tail(sigma2, d, t, false).unwrap();
            close(bound, closed, 1e-6);
            assert!((theta - t / sigma2).abs() < 1e-4, "theta {theta} vs {}", t / sigma2);
        }
    }

    #[test]
    fn master_at_zero_threshold_returns_dimension() {
        let model =
            MgfModel::new(MgfKind::Gaussian, SymMatrix::scaled_identity(3, 1.0)).unwrap();
        let (bound, theta) = master_tail_numeric(&[model], 0.0, 3).unwrap();
        // infimum sits at the left edge of the window
        close(bound, 3.0, 1e-5);
        assert!(theta < 1e-4);
    }

    #[test]
    fn azuma_master_matches_closed_form() {
        let sigma2 = 2.0;
        let d = 3;
        // two summands whose squares sum to sigma2 * I
        let half = SymMatrix::scaled_identity(d, sigma2 / 2.0);
        let models = vec![
            MgfModel::new(MgfKind::Azuma, half.clone()).unwrap(),
            MgfModel::new(MgfKind::Azuma, half).unwrap(),
        ];
        for &t in &[1.0, 2.0, 4.0] {
            let (bound, theta) = master_tail_numeric(&models, t, d).unwrap();
            let closed = bounds::azuma_tail(sigma2, d, t, false).unwrap();
            close(bound, closed, 1e-6);
            assert!((theta - t / (4.0 * sigma2)).abs() < 1e-4);
        }
    }

    #[test]
    fn chernoff_master_matches_multiplicative_form() {
        // four psd summands with means summing to mu * I
        let d = 2;
        let mu = 4.0;
        let models = vec![
            MgfModel::new(MgfKind::Chernoff, SymMatrix::identity(d)).unwrap();
            4
        ];
        let delta = 0.5;
        let t = (1.0 + delta) * mu;
        let (bound, theta) = master_tail_numeric(&models, t, d).unwrap();
        let closed =
            bounds::chernoff_multiplicative_tail(mu, 1.0, d, delta, bounds::Side::Upper, false)
                .unwrap();
        close(bound, closed, 1e-6);
        assert!((theta - (1.0 + delta).ln()).abs() < 1e-4);
    }

    #[test]
    fn bennett_master_matches_divergence_exponent() {
        let d = 2;
        let sigma2 = 1.5;
        let model = MgfModel::new(
            MgfKind::BernsteinBounded,
            SymMatrix::scaled_identity(d, sigma2),
        )
        .unwrap();
        for &t in &[0.5, 1.5, 3.0] {
            let (bound, theta) = master_tail_numeric(&[model.clone()], t, d).unwrap();
            let bb = bounds::bernstein_bounded_tail(sigma2, 1.0, d, t).unwrap();
            close(bound, bb.bennett, 1e-6);
            assert!((theta - (1.0 + t / sigma2).ln()).abs() < 1e-4);
        }
    }

    #[test]
    fn subexp_master_never_beats_its_own_infimum_but_beats_closed_form() {
        let d = 2;
        let sigma2 = 1.0;
        let model = MgfModel::new(
            MgfKind::BernsteinSubexp,
            SymMatrix::scaled_identity(d, sigma2),
        )
        .unwrap();
        for &t in &[0.5, 1.0, 2.0, 5.0] {
            let (bound, theta) = master_tail_numeric(&[model.clone()], t, d).unwrap();
            let closed = bounds::bernstein_subexp_tail(sigma2, 1.0, d, t).unwrap();
            // the closed form picks theta = t / (sigma2 + t), not the true
            // minimizer, so the numeric bound can only be tighter
            assert!(bound <= closed.main * (1.0 + 1e-9), "{bound} vs {}", closed.main);
            assert!(theta < 1.0);
        }
    }

    #[test]
    fn subexp_theta_domain_is_enforced() {
        let model =
            MgfModel::new(MgfKind::BernsteinSubexp, SymMatrix::identity(2)).unwrap();
        assert!(model.log_mgf_bound(0.5).is_ok());
        assert!(matches!(
            model.log_mgf_bound(1.0),
            Err(Error::ThetaOutOfDomain { .. })
        ));
        assert!(matches!(
            model.log_mgf_bound(-0.1),
            Err(Error::ThetaOutOfDomain { .. })
        ));
    }

    #[test]
    fn shape_must_be_psd() {
        let err = MgfModel::new(MgfKind::Gaussian, SymMatrix::diag(&[1.0, -0.5]));
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn mixed_kind_models_combine() {
        let d = 2;
        let models = vec![
            MgfModel::new(MgfKind::Gaussian, SymMatrix::scaled_identity(d, 0.5)).unwrap(),
            MgfModel::new(MgfKind::Azuma, SymMatrix::scaled_identity(d, 0.25)).unwrap(),
        ];
        // combined rate 0.5 theta^2/2 + 0.25 * 2 theta^2 = 0.75 theta^2,
        // i.e. a gaussian bound with sigma2 = 1.5
        let t = 2.0;
        let (bound, _) = master_tail_numeric(&models, t, d).unwrap();
        let closed = bounds::gaussian_series_tail(1.5, d, t, false).unwrap();
        close(bound, closed, 1e-6);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let model = MgfModel::new(MgfKind::Gaussian, SymMatrix::identity(2)).unwrap();
        assert!(matches!(
            master_tail_numeric(&[model], 1.0, 3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn golden_section_finds_a_quadratic_minimum() {
        let f = |x: f64| (x - 2.5) * (x - 2.5) + 1.0;
        let (x, v) = golden_section_min(&f, 0.1, 10.0, 1e-12);
        // the argmin of a rounded objective is only localizable to about
        // sqrt(eps) * scale, the value to full precision
        assert!((x - 2.5).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-12);
    }
}

//! The bound registry: maps a theorem name plus named parameters onto one
//! or more [`BoundCurve`]s evaluated on a threshold grid. The first curve
//! is the primary one (the value printed in single-threshold mode and the
//! one dominance is checked against).

use std::fs;
use std::path::Path;

use matrix_tails::bounds::curve::params;
use matrix_tails::bounds::mgf::master_tail_numeric;
use matrix_tails::bounds::{
    azuma_tail, bernstein_bounded_tail, bernstein_rect_tail, bernstein_subexp_tail,
    chernoff_divergence_tail, chernoff_multiplicative_tail, gaussian_series_tail, mcdiarmid_tail,
    rectangular_series_tail, Side,
};
use matrix_tails::{BoundCurve, MgfKind, MgfModel, SymMatrix};
use serde::Deserialize;

use crate::args::{SideArg, Theorem, TheoremParams};
use crate::error::CliError;

pub struct CurveSet {
    pub curves: Vec<BoundCurve>,
    /// Optimal exponents per grid point, for the numerically optimized bound.
    pub theta_star: Option<Vec<f64>>,
}

#[derive(Deserialize)]
struct ModelEntry {
    kind: MgfKind,
    shape: Vec<Vec<f64>>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, theorem: Theorem) -> Result<T, CliError> {
    v.ok_or_else(|| {
        CliError::Config(format!("--theorem {} requires --{flag}", theorem.label()))
    })
}

fn side_of(s: SideArg) -> Side {
    match s {
        SideArg::Lower => Side::Lower,
        SideArg::Upper => Side::Upper,
    }
}

fn load_models(path: &Path) -> Result<Vec<MgfModel>, CliError> {
    let text = fs::read_to_string(path)?;
    let entries: Vec<ModelEntry> = serde_json::from_str(&text)?;
    if entries.is_empty() {
        return Err(CliError::Config("models file lists no mgf models".into()));
    }
    entries
        .into_iter()
        .map(|e| {
            let shape = SymMatrix::from_rows(e.shape)?;
            Ok(MgfModel::new(e.kind, shape)?)
        })
        .collect()
}

/// Evaluates the named bound on `grid`. `mu` and `t` keep their spectral
/// meaning everywhere: for the psd bounds the threshold is translated
/// internally to the fraction `t / (n R)` or the deviation `t/mu - 1`.
/// `n_summands` comes from `--n`, which for `simulate` is the ensemble's
/// own summand count.
pub fn build_curves(
    theorem: Theorem,
    p: &TheoremParams,
    n_summands: Option<usize>,
    grid: Vec<f64>,
) -> Result<CurveSet, CliError> {
    let r = p.r.unwrap_or(1.0);
    let curves = match theorem {
        Theorem::Gaussian => {
            let sigma2 = need(p.sigma2, "sigma2", theorem)?;
            let d = need(p.d, "d", theorem)?;
            let two = p.two_sided;
            vec![BoundCurve::from_fn(
                theorem.label(),
                params(&[("sigma2", sigma2), ("d", d as f64)]),
                grid,
                |t| gaussian_series_tail(sigma2, d, t, two),
            )?]
        }
        Theorem::RectGaussian => {
            let sigma2 = need(p.sigma2, "sigma2", theorem)?;
            let d1 = need(p.d1, "d1", theorem)?;
            let d2 = need(p.d2, "d2", theorem)?;
            vec![BoundCurve::from_fn(
                theorem.label(),
                params(&[("sigma2", sigma2), ("d1", d1 as f64), ("d2", d2 as f64)]),
                grid,
                |t| rectangular_series_tail(sigma2, d1, d2, t),
            )?]
        }
        Theorem::ChernoffI => {
            let n = need(n_summands, "n", theorem)?;
            let d = need(p.d, "d", theorem)?;
            let mu = need(p.mu, "mu", theorem)?;
            let side = side_of(p.side);
            let scale = n as f64 * r;
            let mu_bar = mu / scale;
            vec![BoundCurve::from_fn(
                theorem.label(),
                params(&[("mu", mu), ("R", r), ("n", n as f64), ("d", d as f64)]),
                grid,
                |t| chernoff_divergence_tail(n, d, mu_bar, t / scale, side),
            )?]
        }
        Theorem::ChernoffII => {
            let d = need(p.d, "d", theorem)?;
            let mu = need(p.mu, "mu", theorem)?;
            let side = side_of(p.side);
            let simplified = p.simplified;
            vec![BoundCurve::from_fn(
                theorem.label(),
                params(&[("mu", mu), ("R", r), ("d", d as f64)]),
                grid,
                |t| {
                    let delta = match side {
                        Side::Lower => 1.0 - t / mu,
                        Side::Upper => t / mu - 1.0,
                    };
                    chernoff_multiplicative_tail(mu, r, d, delta, side, simplified)
                },
            )?]
        }
        Theorem::BernsteinBounded => {
            let sigma2 = need(p.sigma2, "sigma2", theorem)?;
            let d = need(p.d, "d", theorem)?;
            let shared = params(&[("sigma2", sigma2), ("R", r), ("d", d as f64)]);
            let pick = |f: fn(&matrix_tails::bounds::BernsteinBounds) -> f64, label| {
                BoundCurve::from_fn(label, shared.clone(), grid.clone(), move |t| {
                    Ok(f(&bernstein_bounded_tail(sigma2, r, d, t)?))
                })
            };
            vec![
                pick(|b| b.bennett, "bernstein-bounded:bennett")?,
                pick(|b| b.bernstein, "bernstein-bounded:bernstein")?,
                pick(|b| b.split, "bernstein-bounded:split")?,
            ]
        }
        Theorem::BernsteinSubexp => {
            let sigma2 = need(p.sigma2, "sigma2", theorem)?;
            let d = need(p.d, "d", theorem)?;
            let shared = params(&[("sigma2", sigma2), ("R", r), ("d", d as f64)]);
            let main = BoundCurve::from_fn(
                "bernstein-subexp:main",
                shared.clone(),
                grid.clone(),
                |t| Ok(bernstein_subexp_tail(sigma2, r, d, t)?.main),
            )?;
            let split = BoundCurve::from_fn("bernstein-subexp:split", shared, grid, |t| {
                Ok(bernstein_subexp_tail(sigma2, r, d, t)?.split)
            })?;
            vec![main, split]
        }
        Theorem::BernsteinRect => {
            let sigma2 = need(p.sigma2, "sigma2", theorem)?;
            let d1 = need(p.d1, "d1", theorem)?;
            let d2 = need(p.d2, "d2", theorem)?;
            vec![BoundCurve::from_fn(
                theorem.label(),
                params(&[
                    ("sigma2", sigma2),
                    ("R", r),
                    ("d1", d1 as f64),
                    ("d2", d2 as f64),
                ]),
                grid,
                |t| bernstein_rect_tail(sigma2, r, d1, d2, t),
            )?]
        }
        Theorem::Azuma => {
            let sigma2 = need(p.sigma2, "sigma2", theorem)?;
            let d = need(p.d, "d", theorem)?;
            let sym = p.conditionally_symmetric;
            vec![BoundCurve::from_fn(
                theorem.label(),
                params(&[("sigma2", sigma2), ("d", d as f64)]),
                grid,
                |t| azuma_tail(sigma2, d, t, sym),
            )?]
        }
        Theorem::Mcdiarmid => {
            let sigma2 = need(p.sigma2, "sigma2", theorem)?;
            let d = need(p.d, "d", theorem)?;
            vec![BoundCurve::from_fn(
                theorem.label(),
                params(&[("sigma2", sigma2), ("d", d as f64)]),
                grid,
                |t| mcdiarmid_tail(sigma2, d, t),
            )?]
        }
        Theorem::Master => {
            let path = p.models.as_deref().ok_or_else(|| {
                CliError::Config("--theorem master requires --models <json file>".into())
            })?;
            let models = load_models(path)?;
            let d = p.d.unwrap_or_else(|| models[0].dim());
            let mut thetas = Vec::with_capacity(grid.len());
            let mut values = Vec::with_capacity(grid.len());
            for &t in &grid {
                let (bound, theta) = master_tail_numeric(&models, t, d)?;
                values.push(bound);
                thetas.push(theta);
            }
            let clipped = values.iter().map(|&v| v.min(1.0)).collect();
            let curve = BoundCurve {
                label: theorem.label().into(),
                parameters: params(&[("d", d as f64), ("models", models.len() as f64)]),
                t_grid: grid,
                values,
                clipped,
            };
            return Ok(CurveSet {
                curves: vec![curve],
                theta_star: Some(thetas),
            });
        }
    };
    Ok(CurveSet {
        curves,
        theta_star: None,
    })
}

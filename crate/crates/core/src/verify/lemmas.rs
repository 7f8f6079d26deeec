//! Randomized verification of the semidefinite and trace inequalities the
//! tail bounds rest on. Every check is exact up to floating point: finite
//! supports are enumerated, Gaussian expectations use 64-node quadrature,
//! and each instance reports a signed slack (violation when negative).
//!
//! The slack convention: for a matrix inequality `L <= R` (psd order) the
//! slack is `lambda_min(R - L)`; for a trace inequality it is `RHS - LHS`;
//! for an equality it is `-||difference||`. A lemma passes when the worst
//! slack over all instances stays above `-tol`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{trace_product, SymMatrix};
use crate::rng::KeyedStream;
use crate::verify::quadrature::{GaussHermite, GH_NODES};

pub const LEMMA_IDS: [&str; 18] = [
    "GT",         // tr e^{A+H} <= tr(e^A e^H)
    "EXP1",       // I + A <= e^A  and  cosh A <= e^{A^2/2}
    "TRMONO",     // A <= H implies tr e^A <= tr e^H
    "LOGMONO",    // 0 < A <= H implies log A <= log H
    "LOGCONC",    // log is operator concave
    "LIEB",       // A -> tr exp(H + log A) is concave on pd matrices
    "CORCUM",     // E tr exp(H + X) <= tr exp(H + log E e^X)
    "SUBADD",     // E tr exp(sum X_k) <= tr exp(sum log E e^{X_k})
    "LAPLACE",    // P(lambda_max(Y) >= t) <= inf_theta e^{-theta t} E tr e^{theta Y}
    "MGF-RAD",    // cosh(theta A) <= e^{theta^2 A^2 / 2}
    "MGF-GAUSS",  // E e^{g theta A} = e^{theta^2 A^2 / 2} exactly
    "MGF-CHER",   // E e^{theta X} <= I + (e^theta - 1) E X for psd contractions
    "MGF-BERN",   // E e^{theta X} <= exp((e^theta - theta - 1) E X^2), lambda_max(X) <= 1
    "MGF-SUBEXP", // E e^{theta X} <= exp(theta^2/(2(1-theta)) E X^2), ||X|| <= 1
    "SYMM",       // E tr e^{H+X} <= E tr e^{H+2eX} for zero-mean X
    "MGF-AZUMA",  // log cosh(2 theta X) <= 2 theta^2 A^2 when X^2 <= A^2
    "JENSEN2",    // (E X)^2 <= E X^2
    "AWREL",      // both summed-mgf routes dominate E tr e^{theta Y}; pooled route is tighter
];

const N_LEMMAS: usize = LEMMA_IDS.len();
const THETAS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
const SUBEXP_THETAS: [f64; 2] = [0.1, 0.5];
const MIX_WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];

/// Outcome of one lemma across all instances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub lemma_id: String,
    pub instances: usize,
    /// Most negative slack observed (nonnegative slack everywhere shows up
    /// as the smallest margin).
    pub worst_violation: f64,
    pub pass: bool,
}

/// Runs every check `instances` times at the given dimension. Instance `i`
/// of lemma `j` draws from the stream keyed `(seed, i, j)`, so verdicts are
/// independent of scheduling and of the other lemmas.
pub fn lemma_suite(
    dim: usize,
    instances: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<LemmaVerdict>> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if instances == 0 {
        return Err(Error::Domain("need at least one instance".into()));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let gh = GaussHermite::new(GH_NODES);

    let slack_rows: Vec<[f64; N_LEMMAS]> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut row = [f64::INFINITY; N_LEMMAS];
            for (j, slot) in row.iter_mut().enumerate() {
                let mut stream = KeyedStream::new(seed, i as u64, j as u64);
                *slot = run_check(j, dim, &mut stream, &gh);
            }
            row
        })
        .collect();

    let mut worst = [f64::INFINITY; N_LEMMAS];
    for row in &slack_rows {
        for (w, &s) in worst.iter_mut().zip(row.iter()) {
            *w = w.min(s);
        }
    }

    Ok(LEMMA_IDS
        .iter()
        .zip(worst.iter())
        .map(|(&id, &w)| LemmaVerdict {
            lemma_id: id.to_string(),
            instances,
            worst_violation: w,
            pass: w >= -tol,
        })
        .collect())
}

fn run_check(lemma: usize, d: usize, s: &mut KeyedStream, gh: &GaussHermite) -> f64 {
    match lemma {
        0 => golden_thompson(d, s),
        1 => transfer_rules(d, s),
        2 => trace_exp_monotone(d, s),
        3 => log_monotone(d, s),
        4 => log_concave(d, s),
        5 => lieb_concavity(d, s),
        6 => cumulant_corollary(d, s),
        7 => subadditivity(d, s),
        8 => laplace_transform(d, s),
        9 => rademacher_mgf(d, s),
        10 => gaussian_mgf(d, s, gh),
        11 => chernoff_mgf(d, s),
        12 => bernstein_mgf(d, s),
        13 => subexp_mgf(d, s),
        14 => symmetrization(d, s),
        15 => azuma_mgf(d, s),
        16 => jensen_square(d, s),
        17 => summed_mgf_routes(d, s),
        _ => unreachable!("lemma index out of range"),
    }
}

// --- instance construction -------------------------------------------------

fn pick_theta(s: &mut KeyedStream) -> f64 {
    THETAS[s.index(THETAS.len())]
}

/// Random symmetric matrix rescaled to a spectral norm in
/// `[0.3, 1] * max_norm`; keeps every exponential in this file finite.
fn random_sym(s: &mut KeyedStream, d: usize, max_norm: f64) -> SymMatrix {
    let raw = SymMatrix::from_fn(d, |_, _| s.standard_normal());
    let norm = raw.spectral_norm();
    let target = (0.3 + 0.7 * s.uniform_01()) * max_norm;
    if norm <= 1e-12 {
        return SymMatrix::scaled_identity(d, target);
    }
    raw.scale(target / norm)
}

/// Random positive definite matrix with spectrum inside roughly [0.05, 2].
fn random_pd(s: &mut KeyedStream, d: usize) -> SymMatrix {
    let g = random_sym(s, d, 1.0);
    let eps = 0.05 + 0.45 * s.uniform_01();
    let mut m = g.square();
    m = m.add(&SymMatrix::scaled_identity(d, eps)).expect("same dim");
    let norm = m.spectral_norm();
    if norm > 2.0 {
        m = m.scale(2.0 / norm);
    }
    m
}

/// Random probability vector of length `m` bounded away from zero.
fn random_probs(s: &mut KeyedStream, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| 0.05 + s.uniform_01()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

/// Finite-support random symmetric variable: outcomes with probabilities.
fn random_support(s: &mut KeyedStream, d: usize, m: usize, max_norm: f64) -> Vec<(SymMatrix, f64)> {
    let probs = random_probs(s, m);
    probs
        .into_iter()
        .map(|p| (random_sym(s, d, max_norm), p))
        .collect()
}

/// Centers a support so the mean is exactly zero.
fn centered(support: Vec<(SymMatrix, f64)>) -> Vec<(SymMatrix, f64)> {
    let d = support[0].0.dim();
    let mut mean = SymMatrix::zero(d);
    for (v, p) in &support {
        mean.accumulate(v, *p);
    }
    support
        .into_iter()
        .map(|(v, p)| (v.sub(&mean).expect("same dim"), p))
        .collect()
}

/// Three-summand product ensemble with two-point marginals; returns the
/// marginals and the eigenvalues of each of the 8 joint outcomes (scaled by
/// `theta`), with their probabilities.
struct TwoPointProduct {
    marginals: Vec<[(SymMatrix, f64); 2]>,
}

impl TwoPointProduct {
    fn random(s: &mut KeyedStream, d: usize) -> Self {
        let marginals = (0..3)
            .map(|_| {
                let p = 0.2 + 0.6 * s.uniform_01();
                [
                    (random_sym(s, d, 1.5), p),
                    (random_sym(s, d, 1.5), 1.0 - p),
                ]
            })
            .collect();
        TwoPointProduct { marginals }
    }

    /// All joint outcomes of `Y = sum_k X_k` with probabilities.
    fn joint(&self) -> Vec<(SymMatrix, f64)> {
        let d = self.marginals[0][0].0.dim();
        let n = self.marginals.len();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            let mut sum = SymMatrix::zero(d);
            let mut p = 1.0;
            for (k, pair) in self.marginals.iter().enumerate() {
                let (m, q) = &pair[(mask >> k) & 1];
                sum.accumulate(m, 1.0);
                p *= q;
            }
            out.push((sum, p));
        }
        out
    }

    /// `log E e^{theta X_k}` for each summand.
    fn log_mgfs(&self, theta: f64) -> Vec<SymMatrix> {
        self.marginals
            .iter()
            .map(|[(v0, p0), (v1, p1)]| {
                let mut e = v0.scale(theta).exp_m().expect("bounded").scale(*p0);
                e.accumulate(&v1.scale(theta).exp_m().expect("bounded"), *p1);
                e.log_m().expect("convex combination of pd matrices")
            })
            .collect()
    }
}

// --- the checks ------------------------------------------------------------

fn golden_thompson(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let a = random_sym(s, d, 2.0).scale(theta.min(1.0));
    let h = random_sym(s, d, 2.0).scale(theta.min(1.0));
    let lhs = a.add(&h).expect("same dim").trace_exp();
    let rhs = trace_product(
        &a.exp_m().expect("bounded"),
        &h.exp_m().expect("bounded"),
    )
    .expect("same dim");
    rhs - lhs
}

fn transfer_rules(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let a = random_sym(s, d, 2.0).scale(theta);
    let exp_a = a.exp_m().expect("bounded");
    let affine = SymMatrix::identity(d).add(&a).expect("same dim");
    let first = exp_a.sub(&affine).expect("same dim").lambda_min();

    let half_sq = a.square().scale(0.5);
    let gauss_dom = half_sq.exp_m().expect("bounded");
    let cosh_a = a.cosh_m().expect("bounded");
    let second = gauss_dom.sub(&cosh_a).expect("same dim").lambda_min();
    first.min(second)
}

fn trace_exp_monotone(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let a = random_sym(s, d, 2.0);
    let bump = random_sym(s, d, 1.0).square();
    let h = a.add(&bump).expect("same dim");
    h.scale(theta).trace_exp() - a.scale(theta).trace_exp()
}

fn log_monotone(d: usize, s: &mut KeyedStream) -> f64 {
    let a = random_pd(s, d);
    let bump = random_sym(s, d, 1.0).square();
    let h = a.add(&bump).expect("same dim");
    let log_a = a.log_m().expect("pd by construction");
    let log_h = h.log_m().expect("pd plus psd stays pd");
    log_h.sub(&log_a).expect("same dim").lambda_min()
}

fn log_concave(d: usize, s: &mut KeyedStream) -> f64 {
    let a = random_pd(s, d);
    let h = random_pd(s, d);
    let log_a = a.log_m().expect("pd");
    let log_h = h.log_m().expect("pd");
    let mut worst = f64::INFINITY;
    for &tau in &MIX_WEIGHTS {
        let mix = a.scale(tau).add(&h.scale(1.0 - tau)).expect("same dim");
        let log_mix = mix.log_m().expect("pd mixture");
        let chord = log_a.scale(tau).add(&log_h.scale(1.0 - tau)).expect("same dim");
        worst = worst.min(log_mix.sub(&chord).expect("same dim").lambda_min());
    }
    worst
}

fn lieb_concavity(d: usize, s: &mut KeyedStream) -> f64 {
    let h = random_sym(s, d, 1.0);
    let a1 = random_pd(s, d);
    let a2 = random_pd(s, d);
    let f = |x: &SymMatrix| -> f64 {
        h.add(&x.log_m().expect("pd input"))
            .expect("same dim")
            .trace_exp()
    };
    let f1 = f(&a1);
    let f2 = f(&a2);
    let mut worst = f64::INFINITY;
    for &tau in &MIX_WEIGHTS {
        let mix = a1.scale(tau).add(&a2.scale(1.0 - tau)).expect("same dim");
        worst = worst.min(f(&mix) - (tau * f1 + (1.0 - tau) * f2));
    }
    worst
}

fn cumulant_corollary(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let h = random_sym(s, d, 1.0);
    let support = random_support(s, d, 3, 1.5);
    let mut lhs = 0.0;
    let mut mgf = SymMatrix::zero(d);
    for (v, p) in &support {
        let scaled = v.scale(theta);
        lhs += p * h.add(&scaled).expect("same dim").trace_exp();
        mgf.accumulate(&scaled.exp_m().expect("bounded"), *p);
    }
    let rhs = h
        .add(&mgf.log_m().expect("mixture of pd matrices"))
        .expect("same dim")
        .trace_exp();
    rhs - lhs
}

fn subadditivity(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let prod = TwoPointProduct::random(s, d);
    let lhs: f64 = prod
        .joint()
        .iter()
        .map(|(y, p)| p * y.scale(theta).trace_exp())
        .sum();
    let mut cgf_sum = SymMatrix::zero(d);
    for m in prod.log_mgfs(theta) {
        cgf_sum.accumulate(&m, 1.0);
    }
    cgf_sum.trace_exp() - lhs
}

fn laplace_transform(d: usize, s: &mut KeyedStream) -> f64 {
    let prod = TwoPointProduct::random(s, d);
    let joint = prod.joint();
    // one eigensolve per outcome serves every theta and t below
    let spectra: Vec<(Vec<f64>, f64)> = joint
        .iter()
        .map(|(y, p)| (y.eigen().values, *p))
        .collect();
    let lam_max: Vec<f64> = spectra
        .iter()
        .map(|(v, _)| *v.last().expect("nonempty"))
        .collect();
    let lo = lam_max.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = lam_max.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut thetas: Vec<f64> = THETAS.to_vec();
    for i in 0..16 {
        thetas.push(0.01 * (10.0f64 / 0.01).powf(i as f64 / 15.0));
    }

    let mut worst = f64::INFINITY;
    for i in 0..5 {
        let t = lo + (hi + 0.5 - lo) * (i as f64 + s.uniform_01()) / 5.0;
        let tail: f64 = spectra
            .iter()
            .zip(&lam_max)
            .filter(|(_, &m)| m >= t)
            .map(|((_, p), _)| p)
            .sum();
        let bound = thetas
            .iter()
            .map(|&theta| {
                let mgf: f64 = spectra
                    .iter()
                    .map(|(vals, p)| p * vals.iter().map(|l| (theta * l).exp()).sum::<f64>())
                    .sum();
                (-theta * t).exp() * mgf
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.min(bound - tail);
    }
    worst
}

fn rademacher_mgf(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let a = random_sym(s, d, 2.0).scale(theta);
    let dom = a.square().scale(0.5).exp_m().expect("bounded");
    let cosh = a.cosh_m().expect("bounded");
    dom.sub(&cosh).expect("same dim").lambda_min()
}

fn gaussian_mgf(d: usize, s: &mut KeyedStream, gh: &GaussHermite) -> f64 {
    let theta = pick_theta(s);
    let a = random_sym(s, d, 2.0);
    let quad = gh.gaussian_matrix_mgf(&a, theta);
    let exact = a.square().scale(theta * theta * 0.5).exp_m().expect("bounded");
    -quad.sub(&exact).expect("same dim").spectral_norm()
}

fn chernoff_mgf(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let probs = random_probs(s, 3);
    let support: Vec<(SymMatrix, f64)> = probs
        .into_iter()
        .map(|p| {
            // psd contraction: normalized Gram square
            let g = random_sym(s, d, 1.0);
            let mut v = g.square();
            let norm = v.spectral_norm();
            if norm > 1e-12 {
                v = v.scale((0.2 + 0.8 * s.uniform_01()) / norm);
            }
            (v, p)
        })
        .collect();
    let mut mean = SymMatrix::zero(d);
    let mut mgf = SymMatrix::zero(d);
    for (v, p) in &support {
        mean.accumulate(v, *p);
        mgf.accumulate(&v.scale(theta).exp_m().expect("bounded"), *p);
    }
    let affine = SymMatrix::identity(d)
        .add(&mean.scale(theta.exp_m1()))
        .expect("same dim");
    affine.sub(&mgf).expect("same dim").lambda_min()
}

/// Zero-mean support rescaled so `scale_stat` of every outcome is at most 1.
fn centered_unit_support(
    s: &mut KeyedStream,
    d: usize,
    stat: impl Fn(&SymMatrix) -> f64,
) -> Vec<(SymMatrix, f64)> {
    let support = centered(random_support(s, d, 3, 1.0));
    let scale = support
        .iter()
        .map(|(v, _)| stat(v))
        .fold(0.0f64, f64::max);
    if scale <= 1e-12 {
        return support;
    }
    support
        .into_iter()
        .map(|(v, p)| (v.scale(1.0 / scale), p))
        .collect()
}

fn bernstein_mgf(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let support = centered_unit_support(s, d, |v| v.spectral_norm());
    let mut second = SymMatrix::zero(d);
    let mut mgf = SymMatrix::zero(d);
    for (v, p) in &support {
        second.accumulate(&v.square(), *p);
        mgf.accumulate(&v.scale(theta).exp_m().expect("bounded"), *p);
    }
    let dom = second
        .scale(theta.exp_m1() - theta)
        .exp_m()
        .expect("bounded");
    dom.sub(&mgf).expect("same dim").lambda_min()
}

fn subexp_mgf(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = SUBEXP_THETAS[s.index(SUBEXP_THETAS.len())];
    let support = centered_unit_support(s, d, |v| v.spectral_norm());
    let mut second = SymMatrix::zero(d);
    let mut mgf = SymMatrix::zero(d);
    for (v, p) in &support {
        second.accumulate(&v.square(), *p);
        mgf.accumulate(&v.scale(theta).exp_m().expect("bounded"), *p);
    }
    let rate = theta * theta / (2.0 * (1.0 - theta));
    let dom = second.scale(rate).exp_m().expect("bounded");
    dom.sub(&mgf).expect("same dim").lambda_min()
}

fn symmetrization(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let h = random_sym(s, d, 1.0);
    let support = centered(random_support(s, d, 3, 1.0));
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (v, p) in &support {
        lhs += p * h.add(&v.scale(theta)).expect("same dim").trace_exp();
        rhs += p
            * 0.5
            * (h.add(&v.scale(2.0 * theta)).expect("same dim").trace_exp()
                + h.add(&v.scale(-2.0 * theta)).expect("same dim").trace_exp());
    }
    rhs - lhs
}

fn azuma_mgf(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let x = random_sym(s, d, 1.5);
    let bump = random_sym(s, d, 1.0).square();
    // A^2 = X^2 + psd bump dominates X^2 by construction
    let a_sq = x.square().add(&bump).expect("same dim");
    let cosh = x.scale(2.0 * theta).cosh_m().expect("bounded");
    let log_cosh = cosh.log_m().expect("cosh >= I is pd");
    a_sq.scale(2.0 * theta * theta)
        .sub(&log_cosh)
        .expect("same dim")
        .lambda_min()
}

fn jensen_square(d: usize, s: &mut KeyedStream) -> f64 {
    let support = random_support(s, d, 3, 2.0);
    let mut mean = SymMatrix::zero(d);
    let mut second = SymMatrix::zero(d);
    for (v, p) in &support {
        mean.accumulate(v, *p);
        second.accumulate(&v.square(), *p);
    }
    second.sub(&mean.square()).expect("same dim").lambda_min()
}

fn summed_mgf_routes(d: usize, s: &mut KeyedStream) -> f64 {
    let theta = pick_theta(s);
    let prod = TwoPointProduct::random(s, d);
    let exact: f64 = prod
        .joint()
        .iter()
        .map(|(y, p)| p * y.scale(theta).trace_exp())
        .sum();
    let log_mgfs = prod.log_mgfs(theta);
    let summed_edges: f64 = log_mgfs.iter().map(|m| m.lambda_max()).sum();
    let mut pooled = SymMatrix::zero(d);
    for m in &log_mgfs {
        pooled.accumulate(m, 1.0);
    }
    let per_summand_route = d as f64 * summed_edges.exp();
    let pooled_route = d as f64 * pooled.lambda_max().exp();
    // both routes must dominate the exact trace mgf, and pooling the
    // cumulants before taking the spectral edge can only help
    (per_summand_route - exact)
        .min(pooled_route - exact)
        .min(per_summand_route - pooled_route)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_lemmas_pass_at_small_dimension() {
        let verdicts = lemma_suite(3, 40, 123, 1e-8).unwrap();
        assert_eq!(verdicts.len(), LEMMA_IDS.len());
        for v in &verdicts {
            assert!(
                v.pass,
                "{} failed with worst violation {:e}",
                v.lemma_id, v.worst_violation
            );
            assert_eq!(v.instances, 40);
        }
    }

    #[test]
    fn scalar_dimension_works() {
        let verdicts = lemma_suite(1, 25, 7, 1e-8).unwrap();
        for v in &verdicts {
            assert!(v.pass, "{} failed at d = 1", v.lemma_id);
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let a = lemma_suite(2, 10, 99, 1e-8).unwrap();
        let b = lemma_suite(2, 10, 99, 1e-8).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.worst_violation, y.worst_violation);
        }
    }

    #[test]
    fn verdict_ordering_matches_registry() {
        let verdicts = lemma_suite(2, 5, 1, 1e-8).unwrap();
        for (v, &id) in verdicts.iter().zip(LEMMA_IDS.iter()) {
            assert_eq!(v.lemma_id, id);
        }
    }

    #[test]
    fn input_validation() {
        assert!(lemma_suite(0, 10, 1, 1e-8).is_err());
        assert!(lemma_suite(2, 0, 1, 1e-8).is_err());
        assert!(lemma_suite(2, 10, 1, 0.0).is_err());
    }
}

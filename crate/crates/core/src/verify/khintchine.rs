//! Exact even-moment comparison for matrix Rademacher series.
//!
//! For `Y = Σ_k ε_k A_k` with independent signs, the trace moments obey
//!
//! &nbsp;&nbsp; 𝔼 tr Y²ᵖ ≤ (2p − 1)!! · tr (Σ_k A_k²)ᵖ,
//!
//! with equality at `p = 1`. The left side is computed exactly by
//! enumerating all sign patterns (one eigensolve per pattern covers every
//! moment order), so the reported ratios are free of sampling error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Largest family size we are willing to enumerate (2^16 patterns).
pub const MAX_SUMMANDS: usize = 16;
/// Largest moment order 2p supported; beyond this the double factorial and
/// the 2p-th powers start to amplify noise past the digits we can certify.
pub const MAX_ORDER: usize = 8;

/// One moment order of the comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KhintchineRow {
    /// Half the moment order: the row compares `E tr Y^{2p}`.
    pub p: usize,
    /// Exact `E tr Y^{2p}` over all sign patterns.
    pub lhs: f64,
    /// `(2p - 1)!! * tr (sum A_k^2)^p`.
    pub rhs: f64,
    /// `lhs / rhs`; at most 1 up to roundoff, exactly 1 at `p = 1`.
    pub ratio: f64,
}

/// (2p − 1)!! = 1 · 3 · 5 ⋯ (2p − 1), the 2p-th standard normal moment.
pub fn double_factorial_odd(p: usize) -> f64 {
    (1..=p).map(|j| (2 * j - 1) as f64).product()
}

/// Computes the comparison for `p = 1 ..= p_max` over the given coefficient
/// family. Since `tr (−S)^{2p} = tr S^{2p}`, only patterns with the first
/// sign positive are visited and each stands for its mirror image.
pub fn khintchine_check(family: &[SymMatrix], p_max: usize) -> Result<Vec<KhintchineRow>> {
    if family.is_empty() {
        return Err(Error::Domain("coefficient family must be nonempty".into()));
    }
    let n = family.len();
    if n > MAX_SUMMANDS {
        return Err(Error::TooManySummands {
            n,
            cap: MAX_SUMMANDS,
        });
    }
    if p_max == 0 || p_max > MAX_ORDER {
        return Err(Error::Domain(format!(
            "moment order p must lie in 1..={MAX_ORDER}, got {p_max}"
        )));
    }
    let d = family[0].dim();
    if family.iter().any(|a| a.dim() != d) {
        return Err(Error::DimensionMismatch(
            "coefficient family members must share one dimension".into(),
        ));
    }

    let patterns = 1usize << (n - 1);
    let mut moment_sums = vec![0.0f64; p_max];
    for mask in 0..patterns {
        let mut s = family[0].clone();
        for (k, a) in family.iter().enumerate().skip(1) {
            let sign = if (mask >> (k - 1)) & 1 == 1 { -1.0 } else { 1.0 };
            s.accumulate(a, sign);
        }
        let values = s.eigen().values;
        for p in 1..=p_max {
            moment_sums[p - 1] += values
                .iter()
                .map(|l| l.powi(2 * p as i32))
                .sum::<f64>();
        }
    }

    let mut sum_sq = SymMatrix::zero(d);
    for a in family {
        sum_sq.accumulate(&a.square(), 1.0);
    }
    let variance_values = sum_sq.eigen().values;

    let inv_patterns = 1.0 / patterns as f64;
    Ok((1..=p_max)
        .map(|p| {
            let lhs = moment_sums[p - 1] * inv_patterns;
            let rhs = double_factorial_odd(p)
                * variance_values
                    .iter()
                    .map(|l| l.max(0.0).powi(p as i32))
                    .sum::<f64>();
            let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
            KhintchineRow { p, lhs, rhs, ratio }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::KeyedStream;

    fn random_family(n: usize, d: usize, seed: u64) -> Vec<SymMatrix> {
        (0..n)
            .map(|k| {
                let mut s = KeyedStream::new(seed, k as u64, 0);
                SymMatrix::from_fn(d, |_, _| s.standard_normal())
            })
            .collect()
    }

    #[test]
    fn first_moment_is_exact_equality() {
        let family = random_family(6, 4, 11);
        let rows = khintchine_check(&family, 1).unwrap();
        assert!((rows[0].ratio - 1.0).abs() < 1e-12, "ratio {}", rows[0].ratio);
    }

    #[test]
    fn single_summand_hits_inverse_double_factorial() {
        // Y = eps * A, so E tr Y^{2p} = tr A^{2p} while the comparison side
        // carries the full normal moment.
        let family = random_family(1, 3, 5);
        let rows = khintchine_check(&family, 5).unwrap();
        for row in &rows {
            let expected = 1.0 / double_factorial_odd(row.p);
            assert!(
                (row.ratio - expected).abs() < 1e-10,
                "p = {}: ratio {} vs {}",
                row.p,
                row.ratio,
                expected
            );
        }
    }

    #[test]
    fn ratios_never_exceed_one() {
        for seed in [1u64, 2, 3] {
            let family = random_family(7, 3, seed);
            for row in khintchine_check(&family, 6).unwrap() {
                assert!(row.ratio <= 1.0 + 1e-10, "p = {}: {}", row.p, row.ratio);
                assert!(row.ratio > 0.0);
            }
        }
    }

    #[test]
    fn double_factorial_table() {
        let expected = [1.0, 3.0, 15.0, 105.0, 945.0, 10395.0];
        for (p, &want) in (1..=6).zip(expected.iter()) {
            assert_eq!(double_factorial_odd(p), want);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(khintchine_check(&[], 2).is_err());
        let family = random_family(2, 2, 1);
        assert!(khintchine_check(&family, 0).is_err());
        assert!(khintchine_check(&family, 9).is_err());
        let big = random_family(17, 1, 1);
        assert!(matches!(
            khintchine_check(&big, 1),
            Err(Error::TooManySummands { n: 17, cap: 16 })
        ));
        let mixed = vec![
            SymMatrix::identity(2),
            SymMatrix::identity(3),
        ];
        assert!(khintchine_check(&mixed, 1).is_err());
    }
}

//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Sweeps the strict upper triangle in row order, zeroing each pivot with a
//! Givens rotation. The off-diagonal Frobenius mass strictly decreases, and
//! the iteration stops once `off(A) <= OFF_TOL_REL * ||A||_F`. Quadratic
//! convergence makes a few dozen sweeps plenty for the dimensions used here
//! (up to a couple hundred).

use super::{EigenPair, RectMatrix, SymMatrix};

/// Convergence threshold: stop when `off(A) <= OFF_TOL_REL * ||A||_F`.
pub const OFF_TOL_REL: f64 = 1e-12;

/// Safety cap; quadratic convergence reaches the threshold far earlier.
const MAX_SWEEPS: usize = 64;

/// Full eigendecomposition; eigenvalues ascending, eigenvectors the columns
/// of an orthogonal matrix accumulated from the rotations.
pub fn jacobi_eigen(m: &SymMatrix) -> EigenPair {
    let d = m.dim();
    let mut a: Vec<f64> = m.as_slice().to_vec();
    let mut q = vec![0.0f64; d * d];
    for i in 0..d {
        q[i * d + i] = 1.0;
    }

    // ||A||_F is invariant under the rotations, so the threshold is fixed.
    let fro = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let threshold = OFF_TOL_REL * fro;

    if d > 1 && fro > 0.0 {
        for _sweep in 0..MAX_SWEEPS {
            let off = off_norm(&a, d);
            if off <= threshold {
                break;
            }
            for p in 0..d - 1 {
                for r in p + 1..d {
                    rotate(&mut a, &mut q, d, p, r);
                }
            }
        }
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a[i * d + i]
            .partial_cmp(&a[j * d + j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<f64> = order.iter().map(|&i| a[i * d + i]).collect();
    let mut vectors = RectMatrix::zero(d, d);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..d {
            vectors.set(i, new_col, q[i * d + old_col]);
        }
    }

    EigenPair { values, vectors }
}

/// sqrt of the off-diagonal Frobenius mass, `sqrt(2 * sum_{i<j} a_ij^2)`.
fn off_norm(a: &[f64], d: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        for j in i + 1..d {
            let v = a[i * d + j];
            s += v * v;
        }
    }
    (2.0 * s).sqrt()
}

/// One Jacobi rotation zeroing the (p, r) pivot, applied symmetrically to
/// `a` and accumulated into the columns of `q`.
fn rotate(a: &mut [f64], q: &mut [f64], d: usize, p: usize, r: usize) {
    let apr = a[p * d + r];
    if apr == 0.0 {
        return;
    }
    let app = a[p * d + p];
    let arr = a[r * d + r];
    let tau = (arr - app) / (2.0 * apr);
    // Smaller-magnitude root of t^2 + 2 tau t - 1 = 0 keeps the rotation
    // angle under 45 degrees, the numerically stable choice.
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    a[p * d + p] = app - t * apr;
    a[r * d + r] = arr + t * apr;
    a[p * d + r] = 0.0;
    a[r * d + p] = 0.0;

    for i in 0..d {
        if i == p || i == r {
            continue;
        }
        let aip = a[i * d + p];
        let air = a[i * d + r];
        let new_p = c * aip - s * air;
        let new_r = s * aip + c * air;
        a[i * d + p] = new_p;
        a[p * d + i] = new_p;
        a[i * d + r] = new_r;
        a[r * d + i] = new_r;
    }
    for i in 0..d {
        let qip = q[i * d + p];
        let qir = q[i * d + r];
        q[i * d + p] = c * qip - s * qir;
        q[i * d + r] = s * qip + c * qir;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_is_already_solved() {
        let m = SymMatrix::diag(&[3.0, -1.0, 2.0]);
        let ep = m.eigen();
        assert_eq!(ep.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_known_spectrum() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let m = SymMatrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let ep = m.eigen();
        assert!((ep.values[0] - 1.0).abs() < 1e-12);
        assert!((ep.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_and_orthogonality() {
        // Deterministic full matrix with spread entries.
        let d = 12;
        let m = SymMatrix::from_fn(d, |i, j| {
            ((i * 31 + j * 17) % 13) as f64 / 13.0 - 0.5 + if i == j { 1.5 } else { 0.0 }
        });
        let ep = m.eigen();

        let rec = ep.reconstruct();
        let scale = m.spectral_norm().max(1.0);
        for i in 0..d {
            for j in 0..d {
                assert!(
                    (rec.get(i, j) - m.get(i, j)).abs() <= 1e-8 * scale,
                    "reconstruction off at ({i},{j})"
                );
            }
        }

        let q = &ep.vectors;
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|k| q.get(k, i) * q.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((dot - target).abs() <= 1e-10, "Q^T Q off at ({i},{j})");
            }
        }

        let mut sorted = ep.values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(sorted, ep.values, "eigenvalues must come back ascending");
    }

    #[test]
    fn trace_and_frobenius_are_preserved() {
        let d = 9;
        let m = SymMatrix::from_fn(d, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let ep = m.eigen();
        let tr: f64 = ep.values.iter().sum();
        assert!((tr - m.trace()).abs() < 1e-10);
        let fro_sq: f64 = ep.values.iter().map(|v| v * v).sum();
        let direct = m.frobenius_norm();
        assert!((fro_sq.sqrt() - direct).abs() < 1e-10 * direct.max(1.0));
    }

    #[test]
    fn one_dimensional_matrix() {
        let m = SymMatrix::diag(&[-7.5]);
        let ep = m.eigen();
        assert_eq!(ep.values, vec![-7.5]);
        assert_eq!(ep.vectors.get(0, 0), 1.0);
    }
}

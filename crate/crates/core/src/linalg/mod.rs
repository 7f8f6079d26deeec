//! Dense symmetric/rectangular matrices sized for spectral experiments
//! (dimensions in the tens, occasionally low hundreds). Everything is
//! row-major `Vec<f64>`; no BLAS, no panics on shape errors, exact
//! symmetry maintained bit-for-bit so eigensolves are reproducible.

pub mod eigen;
pub mod io;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative floor below which a symmetric matrix fails a positive
/// definiteness gate: lambda_min must exceed `PD_TOL_REL * max(1, lambda_max)`.
pub const PD_TOL_REL: f64 = 1e-12;

/// Relative slack used by [`psd_order_leq_default`].
pub const PSD_ORDER_TOL_REL: f64 = 1e-9;

/// Real symmetric matrix with exact mirror equality: `get(i, j) == get(j, i)`
/// holds bitwise because constructors symmetrize and mutations write both
/// triangles from one value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

/// General dense matrix, possibly non-square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct RectMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Eigendecomposition of a symmetric matrix: `values` ascending, column `k`
/// of `vectors` is the unit eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub values: Vec<f64>,
    pub vectors: RectMatrix,
}

/// Spectral edge summary of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremes {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub spectral_norm: f64,
}

/// Ordered list of equally-shaped matrices, tagged self-adjoint or
/// rectangular. The serialized form is `{"kind": ..., "members": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "members", rename_all = "snake_case")]
pub enum MatrixFamily {
    SelfAdjoint(Vec<SymMatrix>),
    Rectangular(Vec<RectMatrix>),
}

/// Which variance statistic [`variance_parameter`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMode {
    /// `|| sum_k A_k^2 ||` for a self-adjoint family.
    SelfAdjoint,
    /// `max(|| sum_k B_k B_k^T ||, || sum_k B_k^T B_k ||)` for rectangular.
    Rectangular,
    /// `sum_k || A_k^2 ||`, the summed one-matrix-at-a-time variance. Always
    /// at least the self-adjoint value and at most `dim` times it.
    AhlswedeWinter,
}

impl SymMatrix {
    /// Builds from row-major data of length `dim * dim`, storing `(M + M^T)/2`.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let mut m = SymMatrix { dim, data };
        m.symmetrize();
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(
                "rows of a symmetric matrix must form a square".into(),
            ));
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn zero(dim: usize) -> Self {
        SymMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, 1.0)
    }

    pub fn scaled_identity(dim: usize, c: f64) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c;
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let dim = entries.len();
        let mut m = Self::zero(dim);
        for (i, &v) in entries.iter().enumerate() {
            m.data[i * dim + i] = v;
        }
        m
    }

    /// Symmetric matrix with `f(i, j)` entries; the result is symmetrized, so
    /// `f` is only consulted for `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    fn symmetrize(&mut self) {
        let d = self.dim;
        for i in 0..d {
            for j in (i + 1)..d {
                let v = 0.5 * (self.data[i * d + j] + self.data[j * d + i]);
                self.data[i * d + j] = v;
                self.data[j * d + i] = v;
            }
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Writes both `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &SymMatrix, c: f64) -> Result<SymMatrix> {
        self.zip_with(other, |a, b| a + c * b)
    }

    fn zip_with(&self, other: &SymMatrix, f: impl Fn(f64, f64) -> f64) -> Result<SymMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.dim, self.dim, other.dim, other.dim
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(SymMatrix { dim: self.dim, data })
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    /// In-place `self += c * other`; panics on shape mismatch (hot path for
    /// samplers that have already validated shapes).
    pub fn accumulate(&mut self, other: &SymMatrix, c: f64) {
        assert_eq!(self.dim, other.dim, "accumulate needs equal dimensions");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// `A * A`; symmetric exactly because the product of a symmetric matrix
    /// with itself is, and we write one triangle.
    pub fn square(&self) -> SymMatrix {
        let d = self.dim;
        let mut out = SymMatrix::zero(d);
        for i in 0..d {
            for j in i..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.get(i, k) * self.get(k, j);
                }
                out.data[i * d + j] = s;
                out.data[j * d + i] = s;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// `u^T A v`.
    pub fn quad_form(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter()
            .zip(self.mul_vec(v))
            .map(|(&ui, av)| ui * av)
            .sum()
    }

    pub fn to_rect(&self) -> RectMatrix {
        RectMatrix {
            rows: self.dim,
            cols: self.dim,
            data: self.data.clone(),
        }
    }

    /// Full eigendecomposition by cyclic Jacobi rotations; values ascending.
    pub fn eigen(&self) -> EigenPair {
        eigen::jacobi_eigen(self)
    }

    /// Spectral map `A -> Q f(Lambda) Q^T`; every eigenvalue passes through
    /// `f` and the result must stay finite.
    pub fn matrix_function(&self, f: impl Fn(f64) -> f64) -> Result<SymMatrix> {
        let ep = self.eigen();
        let mapped: Vec<f64> = ep.values.iter().map(|&l| f(l)).collect();
        if let Some(bad) = mapped.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "spectral map produced {bad} on eigenvalue input"
            )));
        }
        Ok(ep.recombine(&mapped))
    }

    /// Matrix exponential.
    pub fn exp_m(&self) -> Result<SymMatrix> {
        self.matrix_function(f64::exp)
    }

    /// Matrix logarithm; requires lambda_min > `PD_TOL_REL * max(1, lambda_max)`.
    pub fn log_m(&self) -> Result<SymMatrix> {
        let ep = self.eigen();
        let lambda_min = ep.values[0];
        let lambda_max = ep.values[self.dim - 1];
        let tol = PD_TOL_REL * lambda_max.max(1.0);
        if lambda_min <= tol {
            return Err(Error::NotPositiveDefinite { lambda_min, tol });
        }
        let mapped: Vec<f64> = ep.values.iter().map(|&l| l.ln()).collect();
        Ok(ep.recombine(&mapped))
    }

    pub fn cosh_m(&self) -> Result<SymMatrix> {
        self.matrix_function(f64::cosh)
    }

    /// Positive semidefinite square root. Eigenvalues in
    /// `[-PSD_ORDER_TOL_REL * max(1, lambda_max), 0)` are treated as zero;
    /// anything more negative is a domain error.
    pub fn sqrt_psd(&self) -> Result<SymMatrix> {
        let ep = self.eigen();
        let lambda_max = ep.values[self.dim - 1];
        let clamp = PSD_ORDER_TOL_REL * lambda_max.max(1.0);
        if ep.values[0] < -clamp {
            return Err(Error::Domain(format!(
                "square root of an indefinite matrix (lambda_min = {:e})",
                ep.values[0]
            )));
        }
        let mapped: Vec<f64> = ep.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
        Ok(ep.recombine(&mapped))
    }

    /// `tr exp(A)` without forming the exponential.
    pub fn trace_exp(&self) -> f64 {
        self.eigen().values.iter().map(|l| l.exp()).sum()
    }

    /// Smallest/largest eigenvalue and spectral norm in one eigensolve.
    pub fn extremes(&self) -> Extremes {
        let values = self.eigen().values;
        let lambda_min = values[0];
        let lambda_max = values[values.len() - 1];
        Extremes {
            lambda_min,
            lambda_max,
            spectral_norm: lambda_min.abs().max(lambda_max.abs()),
        }
    }

    pub fn spectral_norm(&self) -> f64 {
        self.extremes().spectral_norm
    }

    pub fn lambda_max(&self) -> f64 {
        self.extremes().lambda_max
    }

    pub fn lambda_min(&self) -> f64 {
        self.extremes().lambda_min
    }
}

/// `tr(A B)` for symmetric `A`, `B`: the entrywise dot product.
pub fn trace_product(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "trace product needs equal dims, got {} and {}",
            a.dim, b.dim
        )));
    }
    Ok(a.data.iter().zip(&b.data).map(|(&x, &y)| x * y).sum())
}

impl RectMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(RectMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::Domain("matrix must have at least one row".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RectMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_major(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> RectMatrix {
        let mut out = RectMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn matmul(&self, other: &RectMatrix) -> Result<RectMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RectMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `B B^T` as an exactly symmetric matrix.
    pub fn gram_left(&self) -> SymMatrix {
        let d = self.rows;
        SymMatrix::from_fn(d, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * self.get(j, k)).sum()
        })
    }

    /// `B^T B` as an exactly symmetric matrix.
    pub fn gram_right(&self) -> SymMatrix {
        let d = self.cols;
        SymMatrix::from_fn(d, |i, j| {
            (0..self.rows).map(|k| self.get(k, i) * self.get(k, j)).sum()
        })
    }

    pub fn scale(&self, c: f64) -> RectMatrix {
        RectMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest singular value, via the smaller Gram matrix.
    pub fn spectral_norm(&self) -> f64 {
        let gram = if self.rows <= self.cols {
            self.gram_left()
        } else {
            self.gram_right()
        };
        gram.lambda_max().max(0.0).sqrt()
    }

    /// Reinterprets a square, numerically symmetric matrix as `SymMatrix`.
    /// Asymmetry above `tol * max(1, max_abs)` is rejected.
    pub fn into_sym(self, tol: f64) -> Result<SymMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        let scale = self.max_abs().max(1.0);
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        if worst > tol * scale {
            return Err(Error::KindMismatch(format!(
                "matrix is not symmetric: max asymmetry {worst:e}"
            )));
        }
        SymMatrix::new(self.rows, self.data)
    }
}

impl EigenPair {
    /// `Q diag(mapped) Q^T`, re-symmetrized.
    pub fn recombine(&self, mapped: &[f64]) -> SymMatrix {
        let d = self.values.len();
        let q = &self.vectors;
        SymMatrix::from_fn(d, |i, j| {
            (0..d).map(|k| q.get(i, k) * mapped[k] * q.get(j, k)).sum()
        })
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.recombine(&self.values)
    }

    /// Column `k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.vectors.get(i, k)).collect()
    }
}

impl MatrixFamily {
    pub fn self_adjoint(members: Vec<SymMatrix>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Domain("family must have at least one member".into()));
        }
        let d = members[0].dim();
        if members.iter().any(|m| m.dim() != d) {
            return Err(Error::DimensionMismatch(
                "family members must share one shape".into(),
            ));
        }
        Ok(MatrixFamily::SelfAdjoint(members))
    }

    pub fn rectangular(members: Vec<RectMatrix>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Domain("family must have at least one member".into()));
        }
        let (r, c) = (members[0].rows(), members[0].cols());
        if members.iter().any(|m| m.rows() != r || m.cols() != c) {
            return Err(Error::DimensionMismatch(
                "family members must share one shape".into(),
            ));
        }
        Ok(MatrixFamily::Rectangular(members))
    }

    pub fn len(&self) -> usize {
        match self {
            MatrixFamily::SelfAdjoint(v) => v.len(),
            MatrixFamily::Rectangular(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// (rows, cols) of every member.
    pub fn member_shape(&self) -> (usize, usize) {
        match self {
            MatrixFamily::SelfAdjoint(v) => (v[0].dim(), v[0].dim()),
            MatrixFamily::Rectangular(v) => (v[0].rows(), v[0].cols()),
        }
    }

    pub fn as_self_adjoint(&self) -> Result<&[SymMatrix]> {
        match self {
            MatrixFamily::SelfAdjoint(v) => Ok(v),
            MatrixFamily::Rectangular(_) => Err(Error::KindMismatch(
                "expected a self-adjoint family".into(),
            )),
        }
    }

    pub fn as_rectangular(&self) -> Result<&[RectMatrix]> {
        match self {
            MatrixFamily::Rectangular(v) => Ok(v),
            MatrixFamily::SelfAdjoint(_) => Err(Error::KindMismatch(
                "expected a rectangular family".into(),
            )),
        }
    }
}

/// `lambda_min(b - a)`: nonnegative (up to tolerance) exactly when `a` is
/// below `b` in the positive semidefinite order.
pub fn psd_gap(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    Ok(b.sub(a)?.lambda_min())
}

/// Whether `a <= b` in the semidefinite order, with slack `tol`.
pub fn psd_order_leq(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<bool> {
    Ok(psd_gap(a, b)? >= -tol)
}

/// [`psd_order_leq`] at the default slack `1e-9 * max(1, ||a|| + ||b||)`.
pub fn psd_order_leq_default(a: &SymMatrix, b: &SymMatrix) -> Result<bool> {
    let tol = PSD_ORDER_TOL_REL * (a.spectral_norm() + b.spectral_norm()).max(1.0);
    psd_order_leq(a, b, tol)
}

/// Self-adjoint dilation of a rectangular matrix: `[[0, B], [B^T, 0]]`.
/// Its largest eigenvalue equals `||B||` and its square is block-diagonal
/// `diag(B B^T, B^T B)`.
pub fn dilation(b: &RectMatrix) -> SymMatrix {
    let (r, c) = (b.rows(), b.cols());
    let d = r + c;
    let mut m = SymMatrix::zero(d);
    for i in 0..r {
        for j in 0..c {
            m.set_sym(i, r + j, b.get(i, j));
        }
    }
    m
}

/// Matrix variance statistic controlling the tail curves; see
/// [`VarianceMode`] for the three conventions.
pub fn variance_parameter(family: &MatrixFamily, mode: VarianceMode) -> Result<f64> {
    match mode {
        VarianceMode::SelfAdjoint => {
            let members = family.as_self_adjoint()?;
            let d = members[0].dim();
            let mut sum = SymMatrix::zero(d);
            for a in members {
                sum = sum.add(&a.square())?;
            }
            Ok(sum.lambda_max())
        }
        VarianceMode::Rectangular => {
            let members = family.as_rectangular()?;
            let (r, c) = (members[0].rows(), members[0].cols());
            let mut left = SymMatrix::zero(r);
            let mut right = SymMatrix::zero(c);
            for b in members {
                left = left.add(&b.gram_left())?;
                right = right.add(&b.gram_right())?;
            }
            Ok(left.lambda_max().max(right.lambda_max()))
        }
        VarianceMode::AhlswedeWinter => {
            let members = family.as_self_adjoint()?;
            Ok(members.iter().map(|a| {
                let n = a.spectral_norm();
                n * n
            }).sum())
        }
    }
}

/// Entrywise product of two equally-shaped matrices.
pub fn schur_product(a: &RectMatrix, b: &RectMatrix) -> Result<RectMatrix> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(RectMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(&x, &y)| x * y).collect(),
    })
}

/// Lower bound on the weak variance
/// `sigma_*^2 = sup_{|u| = |v| = 1} sum_k (u^T A_k v)^2`
/// by alternating maximization: for fixed `v` the optimal `u` is the top
/// eigenvector of `sum_k (A_k v)(A_k v)^T`, and symmetrically. Each restart
/// climbs monotonically, so the best stationary value never exceeds the true
/// supremum; with a handful of random restarts it reaches it in practice.
pub fn weak_variance_estimate(
    family: &MatrixFamily,
    restarts: u32,
    seed: u64,
) -> Result<f64> {
    let members = family.as_self_adjoint()?;
    let d = members[0].dim();

    let objective = |u: &[f64], v: &[f64]| -> f64 {
        members.iter().map(|a| {
            let x = a.quad_form(u, v);
            x * x
        }).sum()
    };

    // One eigensolve gives a deterministic warm start aligned with the
    // largest column of sum A_k^2; random restarts cover the rest.
    let mut sum_sq = SymMatrix::zero(d);
    for a in members {
        sum_sq = sum_sq.add(&a.square())?;
    }
    let warm = {
        let ep = sum_sq.eigen();
        ep.vector(d - 1)
    };

    let mut best = 0.0f64;
    for restart in 0..=restarts {
        let mut v = if restart == 0 {
            warm.clone()
        } else {
            let mut stream = crate::rng::KeyedStream::new(seed, restart as u64, u64::MAX);
            let mut v: Vec<f64> = (0..d).map(|_| stream.standard_normal()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                v[0] = 1.0;
            } else {
                v.iter_mut().for_each(|x| *x /= norm);
            }
            v
        };
        let mut u = v.clone();
        let mut value = objective(&u, &v);
        for _ in 0..200 {
            let grown_u = top_eigvec_of_vector_gram(members, &v);
            u = grown_u;
            let grown_v = top_eigvec_of_vector_gram(members, &u);
            v = grown_v;
            let next = objective(&u, &v);
            if next - value <= 1e-10 * next.abs().max(1.0) {
                value = next;
                break;
            }
            value = next;
        }
        best = best.max(value);
    }
    Ok(best)
}

/// Top eigenvector of `sum_k (A_k w)(A_k w)^T`.
fn top_eigvec_of_vector_gram(members: &[SymMatrix], w: &[f64]) -> Vec<f64> {
    let d = members[0].dim();
    let images: Vec<Vec<f64>> = members.iter().map(|a| a.mul_vec(w)).collect();
    let gram = SymMatrix::from_fn(d, |i, j| {
        images.iter().map(|x| x[i] * x[j]).sum()
    });
    let ep = gram.eigen();
    ep.vector(d - 1)
}

impl TryFrom<Vec<Vec<f64>>> for SymMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        // Serialized symmetric matrices may carry last-digit asymmetry from
        // decimal round-tripping; accept tiny skew and re-symmetrize.
        let r = rows.len();
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch(
                "symmetric matrix rows must form a square".into(),
            ));
        }
        RectMatrix::from_rows(rows)?.into_sym(1e-8)
    }
}

impl From<SymMatrix> for Vec<Vec<f64>> {
    fn from(m: SymMatrix) -> Self {
        m.rows()
    }
}

impl TryFrom<Vec<Vec<f64>>> for RectMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        RectMatrix::from_rows(rows)
    }
}

impl From<RectMatrix> for Vec<Vec<f64>> {
    fn from(m: RectMatrix) -> Self {
        m.row_major()
    }
}

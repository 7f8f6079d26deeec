//! Spectral concentration toolkit for random matrix sums.
//!
//! The library answers one recurring question: given an independent sum
//! `Y = Σ_k X_k` of symmetric (or dilated rectangular) random matrices, how
//! large can the extreme eigenvalues get? It provides
//!
//! * closed-form tail curves ([`bounds`]) for Gaussian and Rademacher
//!   series, sums of positive semidefinite matrices, bounded and
//!   subexponential summands, and bounded martingale differences, plus a
//!   numerically optimized master bound driven by per-summand mgf models;
//! * sampling ensembles ([`ensembles`]) matching those hypotheses, with
//!   bitwise-reproducible parallel sampling;
//! * verification machinery ([`verify`]) that confronts every curve with
//!   Monte Carlo estimates wrapped in exact binomial confidence intervals,
//!   and checks the underlying semidefinite lemmas on random instances
//!   using exact expectations or Gauss–Hermite quadrature;
//! * the small dense symmetric linear algebra ([`linalg`]) everything rests
//!   on: a Jacobi eigensolver, spectral matrix functions, semidefinite-order
//!   predicates, and variance statistics of matrix families.
//!
//! Determinism is a design contract, not an accident: every random draw
//! comes from a counter-keyed stream ([`rng::KeyedStream`]), so any result
//! is a pure function of `(spec, seed)` no matter how work is scheduled
//! across threads.

pub mod bounds;
pub mod ensembles;
pub mod error;
pub mod linalg;
pub mod rng;
pub mod verify;

pub use bounds::{BoundCurve, GridSpec, MgfKind, MgfModel};
pub use ensembles::EnsembleSpec;
pub use error::{Error, Result};
pub use linalg::{MatrixFamily, RectMatrix, SymMatrix, VarianceMode};
pub use rng::KeyedStream;
pub use verify::{Statistic, TailReport};

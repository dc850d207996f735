//! Quantum error-correcting codes built from a weighted graph and a finite
//! abelian group.
//!
//! A weighted graph `Γ` with its vertices split into inputs `X` and outputs
//! `Y`, together with a finite abelian group `G` carrying the standard
//! symmetric bicharacter, determines a coding operator
//! `L²(G^X) → L²(G^Y)` whose matrix elements are products of bicharacter
//! phases. Whether that operator detects a given error configuration
//! `E ⊂ Y` reduces to a kernel condition on integer submatrices of `Γ`
//! acting modulo each cyclic factor of `G`:
//!
//! every solution of `Γ[I, X∪E]·d = 0` (with `I = Y∖E`) must satisfy
//! `d|_X = 0` and `Γ[X, E]·d|_E = 0`.
//!
//! This crate provides:
//!
//! - [`abelian`]: finite abelian groups as products of cyclic factors, and the
//!   standard bicharacter with exact rational phases.
//! - [`graph`]: weighted graphs with an input/output partition, submatrix maps
//!   and the built-in example codes.
//! - [`zmod`]: exact integer linear algebra (Smith normal form, kernels modulo
//!   `d`, fraction-free determinants).
//! - [`detector`]: the kernel-condition decision procedure, with
//!   machine-checkable witnesses and certificates, and configuration sweeps.
//! - [`oracle`]: a dense brute-force realization of the coding isometry and a
//!   direct Knill–Laflamme check, used as ground truth for small instances.
//! - [`singleton`]: off-diagonal subdeterminant reports, bad-prime sets,
//!   randomized weight search and the small-graph census.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod abelian;
pub mod detector;
pub mod graph;
pub mod oracle;
pub mod singleton;
pub mod zmod;

pub use abelian::{FiniteAbelianGroup, GroupElement, GroupError, Phase};
pub use detector::{
    DetectError, DetectionVerdict, FactorCertificate, FailedCondition, SweepOptions, SweepReport,
    Witness,
};
pub use graph::{ErrorConfiguration, GraphError, WeightedGraph};
pub use oracle::{CodeIsometry, OracleConfig, OracleError};
pub use singleton::{BadPrimes, DeterminantReport, SearchOutcome, SingletonError, Skeleton};
pub use zmod::{IntMatrix, KernelBasis, LinalgError, SmithDecomposition};

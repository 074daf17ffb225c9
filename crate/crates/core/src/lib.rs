//! Iterated λ-Aluthge transforms of complex matrices.
//!
//! For `T = U|T|` (left polar decomposition) and `λ ∈ (0,1)` the transform is
//! `Δ_λ(T) = |T|^λ U |T|^{1-λ}`. Iterating it drives every diagonalizable
//! matrix to a normal matrix with the same spectrum. This crate provides
//!
//! * [`linalg`]: a small dense complex kernel (Jacobi eigen/SVD, polar
//!   decomposition, PSD powers, characteristic polynomials, spectra),
//! * [`transform`]: the transform, the Duggal transform, iteration with a stop
//!   policy, the limit map and the λ-scan `R_T(λ)`,
//! * [`tangent`]: the entrywise (Hadamard) description of the derivative of
//!   `Δ_λ` at an invertible diagonal fixed point, its contraction constant and
//!   the stable projection,
//! * [`experiments`]: seeded orbit sampling and numerical experiments on the
//!   λ-dependence of the limit.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]
// f64 inherent methods shadow `Float` whenever some other crate in the build
// (proptest, the std CLI) turns on num-traits/std.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod error;
pub mod experiments;
pub mod linalg;
pub mod tangent;
pub mod transform;

pub use error::{Error, Result};
pub use linalg::{CMatrix, PolarFactors, Spectrum};
pub use num_complex::Complex64;
pub use tangent::{DerivativeModel, DiagonalPoint, TangentVector};
pub use transform::{
    aluthge, duggal, iterate, limit, r_map, split_singular, IterationTrace, LambdaScan, Limit, LimitFlags,
    SingularSplit, StopPolicy,
    StopReason,
};

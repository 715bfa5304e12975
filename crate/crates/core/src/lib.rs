//! Numerical spectral analysis of two-dimensional canonical systems
//! `y′(t) = zJH(t)y(t)` with `J = [[0, −1], [1, 0]]`.
//!
//! The crate evaluates explicit criteria for discreteness, bounded invertibility,
//! summability and limsup eigenvalue distribution of the model operator `A_H`, and
//! provides two independent oracles: eigenvalues of truncated regular problems, and
//! singular values of discretized integral-operator kernels.
//!
//! It is `no_std` (with `alloc`); file formats and the command-line tool live in the
//! companion `canonsys` crate.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod criteria;
pub mod dyadic;
pub mod eigen_oracle;
pub mod error;
pub mod examples;
pub mod growth;
pub mod hamiltonian;
pub mod mat2;
pub mod math;
pub mod operator_lab;
pub mod quad;
pub mod stats;

pub use error::{Error, Result};
pub use hamiltonian::HamiltonianSpec;
pub use mat2::Mat2;

//! Exact and floating-point analysis of m-isometric operators.
//!
//! An operator `T` is an m-isometry when
//! `β_m(T) = Σ_{k=0}^{m} (−1)^k C(m,k) T*^k T^k` vanishes. Equivalently every
//! orbit norm sequence `n ↦ ‖Tⁿh‖²` is a polynomial of degree below `m`.
//!
//! Two scalar modes are available. [`GaussianRational`] gives exact verdicts;
//! [`C64`] gives tolerance-based ones. The mode is the type parameter, so the
//! two cannot be mixed within a computation.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod combinatorics;
pub mod corpus;
pub mod difference;
pub mod error;
pub mod isometry;
pub mod linalg;
pub mod matrix;
pub mod polynomial;
pub mod scalar;
pub mod shift;
pub mod spectral;
pub mod vector;

pub use error::Error;
pub use matrix::Matrix;
pub use polynomial::{Degree, Polynomial};
pub use scalar::{GaussianRational, Mode, Rational, Scalar, C64};
pub use vector::FiniteVector;

//! Numerical verification of the Cesàro-weighted explicit formula for Goldbach
//! representations.
//!
//! The arithmetic side `Σ_{n≤N} r_G(n) (1 - n/N)^k / Γ(k+1)` is computed from the von
//! Mangoldt function ([`sieve`], [`goldbach`]); the analytic side (main term, single and
//! double sums over zeta zeros) from a table of zero ordinates ([`zeros`], [`explicit`]).
//! [`stilde`] checks the underlying expansion of `S̃(z) = Σ Λ(m) e^{-mz}` and
//! [`special`]/[`quadrature`] provide the Gamma function and the Laplace kernel checks.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod explicit;
pub mod goldbach;
pub mod quadrature;
pub mod sieve;
pub mod special;
pub mod stilde;
pub mod summation;
pub mod zeros;

pub use error::{Error, Result};
pub use explicit::{FormulaBreakdown, TruncationConfig};
pub use goldbach::WeightParams;
pub use num_complex::Complex64;
pub use sieve::VonMangoldtTable;
pub use stilde::StildePoint;
pub use zeros::ZeroTable;

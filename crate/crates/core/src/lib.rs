//! Exact Fourier coefficients of Hermitian Eisenstein series over imaginary quadratic
//! fields, local Siegel series via representation densities, and mod-p congruence checks.

pub mod arith;
pub mod eisenstein;
pub mod error;
pub mod hermitian;
pub mod siegel;
pub mod verify;

pub use error::{Error, Result};

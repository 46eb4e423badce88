//! Arithmetic in `O_K` and in the lattice of semi-integral Hermitian matrices.

pub mod algebraic;
pub mod enumerate;
pub mod matrix;

pub use algebraic::{AlgebraicInteger, KElem};
pub use enumerate::enumerate_positive;
pub use matrix::SemiIntegralHermitian;

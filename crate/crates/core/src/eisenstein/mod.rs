//! Fourier coefficients of Hermitian Eisenstein series and operations on coefficient tables.

pub mod classify;
pub mod coefficient;
pub mod normalization;
pub mod table;

pub use classify::{classify_mod_p, Classification};
pub use coefficient::{classical_coefficient, eisenstein_coefficient, prefactor, CoefficientDetail};
pub use normalization::{compute_cp, prefactor_valuation_next_degree, NormalizationData};
pub use table::{build_table, siegel_phi, theta_op, Entry, FourierTable, Status};

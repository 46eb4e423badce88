//! Local Siegel series `F_q(H, X)`: rank-one closed form, exact local densities, and the
//! functional-equation solver.

pub mod polynomial;
pub mod residue;
pub mod rns;

pub use polynomial::{fq_rank1, functional_equation_check, SiegelPolynomial};
pub use residue::{density, norm_histogram, representation_count, DensityProfile, Limits, NormHistogram};
pub mod gauss;
pub mod bridge;
pub mod solve;

pub use bridge::{calibrate_bridge, seed_calibration, BridgeForm, BridgeParameters};
pub use solve::{fq_density, fq_solve, Route, Solved};

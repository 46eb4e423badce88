//! Exact scalars: rationals, Bernoulli numbers, characters, Hilbert symbols, class numbers.

pub mod bernoulli;
pub mod character;
pub mod hilbert;
pub mod numth;
pub mod rational;

pub use bernoulli::{bernoulli, bernoulli_polynomial, generalized_bernoulli};
pub use character::{class_number, is_fundamental, ImaginaryQuadraticField, QuadraticCharacter};
pub use hilbert::{hilbert_symbol, local_character, witness_prime, Place};
pub use numth::sigma;
pub use rational::{congruent_mod_p, is_p_integral, ordp, Congruence, ExactRational, Valuation};

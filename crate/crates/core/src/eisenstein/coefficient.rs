use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::numth::{big_pow, factorize};
use crate::arith::{bernoulli, generalized_bernoulli, ExactRational, ImaginaryQuadraticField};
use crate::error::{Error, Result};
use crate::hermitian::SemiIntegralHermitian;
use crate::siegel::{fq_solve, Limits, Solved};

/// `-B_{k-i, chi^i} / (k - i)`, where `chi^i` is trivial for even `i`.
pub fn bernoulli_factor(field: &ImaginaryQuadraticField, k: u32, i: u32) -> ExactRational {
    let n = (k - i) as usize;
    let b = if i.is_multiple_of(2) { bernoulli(n) } else { generalized_bernoulli(n, &field.character()) };
    -(b / ExactRational::from_integer(n as i64))
}

/// `2^r prod_{i<r} (-B_{k-i,chi^i}/(k-i))^{-1}`.
pub fn prefactor(field: &ImaginaryQuadraticField, k: u32, r: u32) -> ExactRational {
    (0..r).fold(ExactRational::from_integer(big_pow(2, r)), |acc, i| acc / bernoulli_factor(field, k, i))
}

/// A Fourier coefficient together with the local data that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientDetail {
    pub value: ExactRational,
    pub rank: usize,
    pub gamma: Option<BigInt>,
    /// `(q, F_q, F_q(H', q^{k-2r}))` for every prime dividing `gamma(H')`.
    pub locals: Vec<(u64, Solved, BigInt)>,
}

impl CoefficientDetail {
    /// Whether some local factor has positive degree.
    pub fn has_nontrivial_local_factor(&self) -> bool {
        self.locals.iter().any(|(_, s, _)| s.poly.degree() >= 1)
    }
}

/// Whether the error means "cannot be computed within the model or the caps" rather than a
/// failed consistency check.
pub fn is_not_computable(e: &Error) -> bool {
    matches!(e, Error::RamifiedNonintegral(_) | Error::Infeasible(_) | Error::NotStabilized { .. })
}

/// `a(E_{k,K}^{(m)}, H)` for positive definite or zero-padded positive definite `H`.
pub fn eisenstein_coefficient(
    field: &ImaginaryQuadraticField,
    k: u32,
    h: &SemiIntegralHermitian,
    limits: &Limits,
) -> Result<CoefficientDetail> {
    let m = h.degree() as u32;
    if !k.is_multiple_of(2) || k <= 2 * m {
        return Err(Error::InvalidArgument(format!("weight {k} must be even and exceed {}", 2 * m)));
    }
    if h.field() != field {
        return Err(Error::InvalidArgument("matrix belongs to a different field".into()));
    }
    let r = h.zero_padding_split();
    if r == 0 {
        return Ok(CoefficientDetail { value: ExactRational::one(), rank: 0, gamma: None, locals: Vec::new() });
    }
    let block = h.leading_block(r);
    if !block.is_positive_definite() {
        return Err(Error::InvalidArgument(format!(
            "{h} is neither positive definite nor a zero-padded positive definite block"
        )));
    }
    let gamma = block.gamma()?;
    let abs = gamma.magnitude().to_u128().ok_or_else(|| Error::InvalidArgument("gamma too large".into()))?;
    let mut value = prefactor(field, k, r as u32);
    let mut locals = Vec::new();
    for (q, _) in factorize(abs) {
        let solved = fq_solve(&block, q, limits)?;
        let x = big_pow(q, k - 2 * r as u32);
        let local = solved.poly.eval_int(&x);
        value = value * ExactRational::from_integer(local.clone());
        locals.push((q, solved, local));
    }
    Ok(CoefficientDetail { value, rank: r, gamma: Some(gamma), locals })
}

/// `(-2k/B_k) sigma_{k-1}(h)`, the classical degree-one coefficient.
pub fn classical_coefficient(k: u32, h: u64) -> ExactRational {
    let c = ExactRational::from_integer(-2 * k as i64) / bernoulli(k as usize);
    c * ExactRational::from_integer(crate::arith::sigma(k - 1, h))
}

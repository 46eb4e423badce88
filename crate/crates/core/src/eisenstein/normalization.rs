use crate::arith::{ExactRational, ImaginaryQuadraticField};
use crate::error::{Error, Result};

use super::coefficient::bernoulli_factor;

/// Normalization of `E_k^{(m)}` at `p` with `k = m + p - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationData {
    pub p: u64,
    pub k: u32,
    pub m: u32,
    /// `ord_p prod_{i<m} (-B_{k-i,chi^i}/(k-i))^{-1}`.
    pub c_p: i64,
}

impl NormalizationData {
    /// `p^{-C_p}`, the factor turning `E` into `G`.
    pub fn scale(&self) -> ExactRational {
        ExactRational::from_integer(self.p as i64).pow(-self.c_p as i32)
    }
}

fn product_valuation(field: &ImaginaryQuadraticField, p: u64, k: u32, factors: u32) -> i64 {
    (0..factors)
        .map(|i| {
            -bernoulli_factor(field, k, i)
                .ordp(p)
                .finite()
                .expect("Bernoulli factors in this range are nonzero")
        })
        .sum()
}

pub fn compute_cp(field: &ImaginaryQuadraticField, p: u64, m: u32) -> Result<NormalizationData> {
    if field.disc().is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("p = {p} divides D_K = {}", field.disc())));
    }
    let k = m + p as u32 - 1;
    Ok(NormalizationData { p, k, m, c_p: product_valuation(field, p, k, m) })
}

/// `ord_p(p^{-C_p} prod_{i=0}^{m} (-B_{k-i,chi^i}/(k-i))^{-1})` with `k = m + p - 1`.
pub fn prefactor_valuation_next_degree(field: &ImaginaryQuadraticField, p: u64, m: u32) -> Result<i64> {
    if p <= m as u64 + 3 || m % 4 != 2 {
        return Err(Error::InvalidArgument(format!("need p > m + 3 and m = 2 mod 4, got p={p}, m={m}")));
    }
    let data = compute_cp(field, p, m)?;
    Ok(product_valuation(field, p, data.k, m + 1) - data.c_p)
}

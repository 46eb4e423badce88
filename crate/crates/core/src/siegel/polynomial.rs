use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::numth::big_pow;
use crate::arith::{local_character, ExactRational, Place};
use crate::error::{Error, Result};
use crate::hermitian::SemiIntegralHermitian;

/// `F_q(H, X) = c_0 + c_1 X + ... + c_d X^d` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SiegelPolynomial {
    q: u64,
    coeffs: Vec<BigInt>,
}

impl SiegelPolynomial {
    /// Rejects an empty coefficient list or `c_0 != 1`.
    pub fn new(q: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        match coeffs.first() {
            Some(c) if c.is_one() => Ok(SiegelPolynomial { q, coeffs }),
            _ => Err(Error::InvalidArgument(format!("Siegel polynomial at {q} must have constant term 1"))),
        }
    }

    pub fn one(q: u64) -> Self {
        SiegelPolynomial { q, coeffs: vec![BigInt::one()] }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Formal degree, i.e. `ord_q(gamma(H))` for the generating `H` (top coefficients may vanish).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs
            .iter()
            .rev()
            .fold(ExactRational::zero(), |acc, c| acc * x + ExactRational::from_integer(c.clone()))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for SiegelPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}; {}", self.q, cs.join(","))
    }
}

impl FromStr for SiegelPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad Siegel polynomial {s:?}"));
        let (q, cs) = s.split_once(';').ok_or_else(bad)?;
        let q = q.trim().parse().map_err(|_| bad())?;
        let coeffs = cs
            .split(',')
            .map(|c| c.trim().replace('\u{2212}', "-").parse::<BigInt>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        SiegelPolynomial::new(q, coeffs)
    }
}

/// `sum_{i <= ord_q(h)} (qX)^i`.
pub fn fq_rank1(h: u64, q: u64) -> SiegelPolynomial {
    assert!(h >= 1, "fq_rank1 needs h >= 1");
    let mut v = 0;
    let mut m = h;
    while m.is_multiple_of(q) {
        m /= q;
        v += 1;
    }
    SiegelPolynomial { q, coeffs: (0..=v).map(|i| big_pow(q, i)).collect() }
}

/// `xi = chi_{K,q}(gamma(H))` and `d = ord_q(gamma(H))` for a nondegenerate `H`.
pub fn local_invariants(h: &SemiIntegralHermitian, q: u64) -> Result<(i32, usize)> {
    let gamma = h.gamma()?;
    let xi = local_character(h.field(), Place::Prime(q), &gamma);
    let d = crate::arith::rational::ord_int(&gamma, q).expect("gamma is nonzero") as usize;
    Ok((xi, d))
}

/// Coefficient-level functional equation `c_{d-i} = xi^{n-1} q^{n(d-2i)} c_i` for all `i`.
pub fn functional_equation_holds(p: &SiegelPolynomial, xi: i32, n: usize) -> bool {
    let d = p.degree();
    let sign = if n % 2 == 1 || xi == 1 { 1 } else { -1 };
    (0..=d).all(|i| {
        let e = n as i64 * (d as i64 - 2 * i as i64);
        let lhs = &p.coeffs[d - i] * big_pow(p.q, (-e).max(0) as u32);
        let rhs = &p.coeffs[i] * big_pow(p.q, e.max(0) as u32) * sign;
        lhs == rhs
    })
}

/// True iff `P` has degree `ord_q(gamma(H))` and satisfies the functional equation for `H`.
pub fn functional_equation_check(p: &SiegelPolynomial, h: &SemiIntegralHermitian, n: usize) -> bool {
    match local_invariants(h, p.q) {
        Ok((xi, d)) => d == p.degree() && functional_equation_holds(p, xi, n),
        Err(_) => false,
    }
}

/// Indices `1 <= i <= d` whose coefficient is not determined by the functional equation
/// from lower-index coefficients and `c_0 = 1`.
pub fn free_indices(d: usize, xi: i32, n: usize) -> Vec<usize> {
    let sign = if n % 2 == 1 || xi == 1 { 1 } else { -1 };
    (1..=d).filter(|&i| 2 * i < d || (2 * i == d && sign == 1)).collect()
}

/// Completes `c_0..c_{low.len()-1}` to a degree-`d` vector via the functional equation.
/// `low` must cover every free index.
pub fn complete_by_functional_equation(
    q: u64,
    low: &[BigInt],
    d: usize,
    xi: i32,
    n: usize,
) -> Result<Vec<BigInt>> {
    let sign = if n % 2 == 1 || xi == 1 { 1 } else { -1 };
    if let Some(&f) = free_indices(d, xi, n).iter().find(|&&i| i >= low.len()) {
        return Err(Error::InvalidArgument(format!("coefficient {f} is not determined by the functional equation")));
    }
    if low.first().is_none_or(|c| !c.is_one()) {
        return Err(Error::InvalidArgument("constant term must be 1".into()));
    }
    let mut c: Vec<BigInt> = low.iter().take(d + 1).cloned().collect();
    for j in c.len()..=d {
        if 2 * j == d {
            // self-paired and not free: forced to vanish
            c.push(BigInt::zero());
            continue;
        }
        // c_j = sign q^{n(2j-d)} c_{d-j}, with d - j < j already known
        let base = c[d - j].clone();
        let e = n as i64 * (2 * j as i64 - d as i64);
        let val = if e < 0 {
            let den = big_pow(q, (-e) as u32);
            if !(&base % &den).is_zero() {
                return Err(Error::Integrality(format!("coefficient {j} not integral at q={q}")));
            }
            base / den
        } else {
            base * big_pow(q, e as u32)
        };
        c.push(val * sign);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ImaginaryQuadraticField;
    use crate::hermitian::AlgebraicInteger;

    fn poly(q: u64, c: &[i64]) -> SiegelPolynomial {
        SiegelPolynomial::new(q, c.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn rank_one_closed_form() {
        assert_eq!(fq_rank1(1, 7), poly(7, &[1]));
        assert_eq!(fq_rank1(4, 2), poly(2, &[1, 2, 4]));
        assert_eq!(fq_rank1(9, 3), poly(3, &[1, 3, 9]));
        assert_eq!(fq_rank1(12, 2), poly(2, &[1, 2, 4]));
    }

    #[test]
    fn serialization_roundtrip() {
        let p = poly(2, &[1, 0, -16]);
        assert_eq!(p.to_string(), "2; 1,0,-16");
        assert_eq!("2; 1,0,\u{2212}16".parse::<SiegelPolynomial>().unwrap(), p);
        assert!("2; 3,1".parse::<SiegelPolynomial>().is_err());
        assert!("x; 1".parse::<SiegelPolynomial>().is_err());
    }

    #[test]
    fn evaluation() {
        let p = poly(3, &[1, -9]);
        assert_eq!(p.eval_int(&BigInt::from(81)), BigInt::from(-728));
        assert_eq!(p.eval(&ExactRational::new(1, 9)), ExactRational::zero());
    }

    #[test]
    fn functional_equation_examples() {
        let k4 = ImaginaryQuadraticField::new(4).unwrap();
        let id = SemiIntegralHermitian::identity(k4, 2);
        assert!(functional_equation_check(&poly(2, &[1, 0, -16]), &id, 2));
        assert!(!functional_equation_check(&poly(2, &[1, 0, 16]), &id, 2));
        assert!(functional_equation_check(&poly(2, &[1, 2, 4]), &SemiIntegralHermitian::diagonal(k4, vec![4]), 1));
        assert!(!functional_equation_holds(&poly(2, &[1, 1]), -1, 2));
        assert!(functional_equation_holds(&poly(2, &[1, -4]), -1, 2));
        let d13 = SemiIntegralHermitian::binary(k4, 1, 3, AlgebraicInteger::ZERO);
        assert!(functional_equation_check(&poly(3, &[1, -9]), &d13, 2));
        // wrong degree
        assert!(!functional_equation_check(&poly(3, &[1, -9, 0]), &d13, 2));
    }

    #[test]
    fn rank_one_closed_form_satisfies_functional_equation() {
        for q in [2u64, 3, 5, 7] {
            for h in 1..=200u64 {
                assert!(functional_equation_holds(&fq_rank1(h, q), 1, 1));
                assert!(functional_equation_holds(&fq_rank1(h, q), -1, 1));
            }
        }
    }

    #[test]
    fn forcing() {
        assert_eq!(free_indices(2, -1, 2), Vec::<usize>::new());
        assert_eq!(free_indices(2, 1, 2), vec![1]);
        assert_eq!(free_indices(1, 1, 2), Vec::<usize>::new());
        assert_eq!(free_indices(6, -1, 2), vec![1, 2]);
        assert_eq!(free_indices(6, 1, 2), vec![1, 2, 3]);
        assert_eq!(free_indices(4, -1, 1), vec![1, 2]);
        let one = [BigInt::one()];
        let f = complete_by_functional_equation(2, &[BigInt::one(), BigInt::zero()], 2, -1, 2).unwrap();
        assert_eq!(f, [1, 0, -16].map(BigInt::from));
        let f = complete_by_functional_equation(3, &one, 1, -1, 2).unwrap();
        assert_eq!(f, [1, -9].map(BigInt::from));
        let f = complete_by_functional_equation(5, &[BigInt::one(), BigInt::from(5)], 3, 1, 1).unwrap();
        assert_eq!(f, [1, 5, 25, 125].map(BigInt::from));
        assert!(complete_by_functional_equation(2, &one, 3, 1, 2).is_err());
    }
}

//! Exact rationals and p-adic valuations.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Reduced fraction of big integers with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn ordp(&self, p: u64) -> Valuation {
        ordp(self, p)
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        ExactRational::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim().replace('\u{2212}', "-");
        let bad = || Error::Parse(format!("bad rational {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.as_str(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(ExactRational::new(n, d))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational((self.0).$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for ExactRational {
    fn product<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |a, b| a * b)
    }
}

/// p-adic valuation; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// `ord >= n`, with infinity above everything.
    pub fn at_least(self, n: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= n,
            Valuation::Infinity => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero big integer.
pub fn ord_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

pub fn ordp(x: &ExactRational, p: u64) -> Valuation {
    match (ord_int(x.numer(), p), ord_int(x.denom(), p)) {
        (Some(a), Some(b)) => Valuation::Finite(a - b),
        _ => Valuation::Infinity,
    }
}

/// `x` has no `p` in its denominator.
pub fn is_p_integral(x: &ExactRational, p: u64) -> bool {
    ord_int(x.denom(), p) == Some(0)
}

/// Outcome of comparing two rationals modulo `p` inside `Z_(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Congruence {
    Congruent,
    NotCongruent,
    NotPIntegral,
}

pub fn congruent_mod_p(x: &ExactRational, y: &ExactRational, p: u64) -> Congruence {
    if !is_p_integral(x, p) || !is_p_integral(y, p) {
        return Congruence::NotPIntegral;
    }
    if ordp(&(x - y), p).at_least(1) {
        Congruence::Congruent
    } else {
        Congruence::NotCongruent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn reduces_and_normalizes_sign() {
        let x = r(6, -4);
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(r(0, 5).to_string(), "0/1");
        assert_eq!(r(7, 1).to_string(), "7/1");
    }

    #[test]
    fn parses_num_den() {
        assert_eq!("-3/2".parse::<ExactRational>().unwrap(), r(-3, 2));
        assert_eq!("\u{2212}3/2".parse::<ExactRational>().unwrap(), r(-3, 2));
        assert_eq!("12".parse::<ExactRational>().unwrap(), r(12, 1));
        assert!("1/0".parse::<ExactRational>().is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(ordp(&r(1, 252), 7), Valuation::Finite(-1));
        assert_eq!(ordp(&r(0, 1), 5), Valuation::Infinity);
        assert_eq!(ordp(&r(480, 1), 7), Valuation::Finite(0));
        assert_eq!(Valuation::Infinity.to_string(), "inf");
    }

    #[test]
    fn congruence_outcomes() {
        assert_eq!(congruent_mod_p(&r(-1, 240), &r(1, 12), 7), Congruence::Congruent);
        assert_eq!(congruent_mod_p(&r(1, 7), &r(0, 1), 7), Congruence::NotPIntegral);
        assert_eq!(congruent_mod_p(&r(1, 2), &r(0, 1), 7), Congruence::NotCongruent);
    }
}

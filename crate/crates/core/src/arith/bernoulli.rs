//! Bernoulli numbers, Bernoulli polynomials and character-twisted Bernoulli numbers.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::character::QuadraticCharacter;
use super::rational::ExactRational;

fn table() -> &'static RwLock<Vec<BigRational>> {
    static TABLE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigRational::one()]))
}

/// Row `n` of Pascal's triangle.
pub(crate) fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one(); n + 1];
    for k in 1..n {
        row[k] = &row[k - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
    }
    row
}

/// `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> ExactRational {
    if let Some(b) = table().read().unwrap().get(n) {
        return ExactRational::from(b.clone());
    }
    let mut t = table().write().unwrap();
    // another thread may have extended the table meanwhile; extension is idempotent
    while t.len() <= n {
        let m = t.len();
        let row = binomial_row(m + 1);
        let mut s = BigRational::zero();
        for (k, b) in t.iter().enumerate() {
            s += BigRational::from_integer(row[k].clone()) * b;
        }
        t.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    ExactRational::from(t[n].clone())
}

/// `B_n(x) = sum_k C(n,k) B_k x^(n-k)`.
pub fn bernoulli_polynomial(n: usize, x: &ExactRational) -> ExactRational {
    let row = binomial_row(n);
    // Horner in x over descending powers
    let mut acc = ExactRational::zero();
    for (k, c) in row.iter().enumerate() {
        acc = acc * x + ExactRational::from(c.clone()) * bernoulli(k);
    }
    acc
}

/// `B_{n,chi} = f^(n-1) sum_{a=1}^{f} chi(a) B_n(a/f)` for the field character of conductor `f`.
///
/// Expanded as `sum_k C(n,k) B_k f^(k-1) S_{n-k}` with `S_j = sum_a chi(a) a^j`, so the only
/// rationals involved are the `B_k`.
pub fn generalized_bernoulli(n: usize, chi: &QuadraticCharacter) -> ExactRational {
    assert!(n >= 1, "generalized Bernoulli numbers need n >= 1");
    let f = chi.conductor();
    let values: Vec<i32> = (1..=f).map(|a| chi.value(a as i64)).collect();
    // S_j for j = 0..=n
    let mut sums = vec![BigInt::zero(); n + 1];
    for (idx, &c) in values.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let a = BigInt::from(idx as u64 + 1);
        let mut pw = BigInt::one();
        for s in sums.iter_mut() {
            if c > 0 {
                *s += &pw;
            } else {
                *s -= &pw;
            }
            pw *= &a;
        }
    }
    let row = binomial_row(n);
    let fb = ExactRational::from_integer(f);
    let mut total = ExactRational::zero();
    for k in 0..=n {
        let s = &sums[n - k];
        if s.is_zero() {
            continue;
        }
        let b = bernoulli(k);
        if b.is_zero() {
            continue;
        }
        total = total
            + ExactRational::from(row[k].clone() * s) * b * fb.pow(k as i32 - 1);
    }
    total
}

/// The direct defining sum; kept as an independent route for tests.
pub fn generalized_bernoulli_by_definition(n: usize, chi: &QuadraticCharacter) -> ExactRational {
    let f = chi.conductor();
    let fr = ExactRational::from_integer(f);
    let mut s = ExactRational::zero();
    for a in 1..=f {
        let c = chi.value(a as i64);
        if c != 0 {
            let term = bernoulli_polynomial(n, &ExactRational::new(a, f));
            s = if c > 0 { s + term } else { s - term };
        }
    }
    s * fr.pow(n as i32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn small_bernoulli() {
        assert_eq!(bernoulli(0), r(1, 1));
        assert_eq!(bernoulli(1), r(-1, 2));
        assert_eq!(bernoulli(6), r(1, 42));
        assert_eq!(bernoulli(8), r(-1, 30));
        assert_eq!(bernoulli(12), r(-691, 2730));
        assert!(bernoulli(13).is_zero());
    }

    #[test]
    fn recurrence_closure() {
        for n in 1..=60usize {
            let row = binomial_row(n + 1);
            let s: ExactRational = (0..=n)
                .map(|k| ExactRational::from(row[k].clone()) * bernoulli(k))
                .sum();
            assert!(s.is_zero(), "recurrence fails at n = {n}");
        }
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(bernoulli_polynomial(1, &r(0, 1)), r(-1, 2));
        assert_eq!(bernoulli_polynomial(7, &r(1, 4)), r(1281, 49152));
        assert_eq!(bernoulli_polynomial(2, &r(1, 2)), r(-1, 12));
    }

    #[test]
    fn twisted_values() {
        let chi4 = QuadraticCharacter::new(4).unwrap();
        let chi3 = QuadraticCharacter::new(3).unwrap();
        assert_eq!(generalized_bernoulli(1, &chi4), r(-1, 2));
        assert_eq!(generalized_bernoulli(1, &chi3), r(-1, 3));
        assert_eq!(generalized_bernoulli(7, &chi4), r(427, 2));
        assert_eq!(generalized_bernoulli(7, &chi3), r(98, 3));
        assert_eq!(generalized_bernoulli_by_definition(7, &chi3), r(98, 3));
        for n in 1..=12 {
            assert_eq!(
                generalized_bernoulli(n, &chi4),
                generalized_bernoulli_by_definition(n, &chi4)
            );
        }
        // odd character: even-index twisted numbers vanish
        assert!(generalized_bernoulli(8, &chi4).is_zero());
    }
}

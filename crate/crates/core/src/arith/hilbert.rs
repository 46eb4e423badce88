//! Hilbert symbols over Q and the local components of the field's idele class character.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::character::ImaginaryQuadraticField;
use super::numth::{factorize, jacobi};
use super::rational::ExactRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// Split a nonzero integer as `p^v * u` with `p` not dividing `u`.
fn split_unit(n: &BigInt, p: u64) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut u = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

fn residue(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// Hilbert symbol of two nonzero integers.
pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, place: Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol needs nonzero arguments");
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split_unit(a, 2);
            let (beta, v) = split_unit(b, 2);
            let (u8_, v8) = (residue(&u, 8), residue(&v, 8));
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u8_) * eps(v8) + alpha as u64 * omega(v8) + beta as u64 * omega(u8_);
            if e.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_unit(a, p);
            let (beta, v) = split_unit(b, p);
            let mut s = 1;
            if (alpha as u64 * beta as u64 * ((p - 1) / 2)) % 2 == 1 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= jacobi(residue(&u, p) as i128, p as i128);
            }
            if alpha % 2 == 1 {
                s *= jacobi(residue(&v, p) as i128, p as i128);
            }
            s
        }
    }
}

/// Hilbert symbol of nonzero rationals (`n/d` lies in the square class of `n*d`).
pub fn hilbert_symbol(a: &ExactRational, b: &ExactRational, place: Place) -> i32 {
    let a = a.numer() * a.denom();
    let b = b.numer() * b.denom();
    hilbert_symbol_int(&a, &b, place)
}

/// `chi_{K,v}(t) = (t, -D_K)_v`.
pub fn local_character(field: &ImaginaryQuadraticField, place: Place, t: &BigInt) -> i32 {
    hilbert_symbol_int(t, &BigInt::from(-(field.disc() as i64)), place)
}

/// Places where `(t, -D_K)_v` can be nontrivial: infinity and the primes dividing `2 t D_K`.
pub fn relevant_places(field: &ImaginaryQuadraticField, t: &BigInt) -> Vec<Place> {
    let mut primes: Vec<u64> = vec![2];
    for (p, _) in factorize(field.disc() as u128) {
        primes.push(p);
    }
    let abs = t.abs().to_u128().expect("argument too large for place enumeration");
    for (p, _) in factorize(abs) {
        primes.push(p);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places: Vec<Place> = primes.into_iter().map(Place::Prime).collect();
    places.push(Place::Infinity);
    places
}

/// Smallest prime `q` with `chi_{K,q}(gamma) = -1`, for negative `gamma`.
pub fn witness_prime(field: &ImaginaryQuadraticField, gamma: &BigInt) -> u64 {
    assert!(gamma.is_negative(), "witness_prime needs gamma < 0");
    let places = relevant_places(field, gamma);
    let product: i32 = places.iter().map(|&v| local_character(field, v, gamma)).product();
    assert_eq!(product, 1, "product formula fails for gamma = {gamma}");
    places
        .into_iter()
        .find_map(|v| match v {
            Place::Prime(q) if local_character(field, v, gamma) == -1 => Some(q),
            _ => None,
        })
        .expect("the infinite place contributes -1, so some finite place must too")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: i64, b: i64, v: Place) -> i32 {
        hilbert_symbol_int(&BigInt::from(a), &BigInt::from(b), v)
    }

    #[test]
    fn examples() {
        assert_eq!(h(-7, -4, Place::Prime(7)), -1);
        assert_eq!(h(-7, -4, Place::Infinity), -1);
        assert_eq!(h(-7, -4, Place::Prime(2)), 1);
        assert_eq!(h(-1, -1, Place::Prime(2)), -1);
        assert_eq!(h(2, 3, Place::Prime(3)), -1);
    }

    #[test]
    fn rational_arguments_use_square_class() {
        let a = ExactRational::new(-7, 4);
        let b = ExactRational::from_integer(-4);
        assert_eq!(hilbert_symbol(&a, &b, Place::Prime(7)), -1);
    }

    #[test]
    fn witnesses() {
        let k = ImaginaryQuadraticField::new(4).unwrap();
        assert_eq!(witness_prime(&k, &BigInt::from(-7)), 7);
        assert_eq!(witness_prime(&k, &BigInt::from(-4)), 2);
        assert_eq!(witness_prime(&k, &BigInt::from(-12)), 3);
    }

    #[test]
    fn product_formula_grid() {
        for d in [3u64, 4, 7, 8, 11] {
            let k = ImaginaryQuadraticField::new(d).unwrap();
            for t in -50i64..=50 {
                if t == 0 {
                    continue;
                }
                let t = BigInt::from(t);
                let prod: i32 = relevant_places(&k, &t)
                    .into_iter()
                    .map(|v| local_character(&k, v, &t))
                    .product();
                assert_eq!(prod, 1, "D = {d}, t = {t}");
            }
        }
    }
}

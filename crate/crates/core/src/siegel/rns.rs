//! Word-sized prime moduli for exact convolutions: number-theoretic transforms over
//! `(Z/M)^r` and Chinese remaindering back to big integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A prime `p = 1 (mod m)` together with a root of unity of exact order `m = q^N`.
#[derive(Clone, Copy, Debug)]
pub struct NttPrime {
    pub p: u64,
    pub root: u64,
}

/// `count` distinct primes below `2^62` congruent to 1 mod `m`, where `m` is a power of `q`.
pub fn ntt_primes(m: u64, q: u64, count: usize) -> Vec<NttPrime> {
    let mut out = Vec::with_capacity(count);
    let mut j = ((1u64 << 62) - 1) / m;
    while out.len() < count {
        let p = j * m + 1;
        j -= 1;
        if !is_prime_u64(p) {
            continue;
        }
        let root = (2..)
            .map(|a| powmod(a, (p - 1) / m, p))
            .find(|&w| m == 1 || powmod(w, m / q, p) != 1)
            .unwrap();
        out.push(NttPrime { p, root });
    }
    out
}

/// Number of 62-bit moduli needed to represent integers in `[0, bound]`.
pub fn moduli_needed(bound: &BigInt) -> usize {
    (bound.bits() as usize + 1) / 61 + 1
}

/// Garner reconstruction of the least nonnegative residue modulo `prod p_i`.
pub fn crt(residues: &[u64], primes: &[u64]) -> BigInt {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let pb = BigInt::from(p);
        let cur: BigInt = ((&x % &pb) + &pb) % &pb;
        let cur = u64::try_from(cur).unwrap();
        let m_mod = u64::try_from(&modulus % &pb).unwrap();
        let diff = (r + p - cur) % p;
        let t = mulmod(diff, powmod(m_mod, p - 2, p), p);
        x += &modulus * t;
        modulus *= pb;
    }
    x
}

/// In-place discrete Fourier transform along every axis of `data`, viewed as a
/// `(Z/m)^axes` array in row-major order. `root` must have exact order `m`.
pub fn dft_all_axes(data: &mut [u64], m: usize, axes: usize, root: u64, p: u64) {
    let twiddle: Vec<u64> = {
        let mut t = Vec::with_capacity(m);
        let mut w = 1u64;
        for _ in 0..m {
            t.push(w);
            w = mulmod(w, root, p);
        }
        t
    };
    let mut line = vec![0u64; m];
    for a in 0..axes {
        let stride = m.pow((axes - 1 - a) as u32);
        let block = stride * m;
        for start in (0..data.len()).step_by(block) {
            for off in 0..stride {
                let base = start + off;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * stride];
                }
                for u in 0..m {
                    let mut acc: u128 = 0;
                    let mut idx = 0usize;
                    for &v in line.iter() {
                        if v != 0 {
                            acc += v as u128 * twiddle[idx] as u128;
                            if acc >= 1u128 << 126 {
                                acc %= p as u128;
                            }
                        }
                        idx += u;
                        if idx >= m {
                            idx -= m;
                        }
                    }
                    data[base + u * stride] = (acc % p as u128) as u64;
                }
            }
        }
    }
}

//! Small-integer number theory: primality, factoring, divisor sums, Kronecker symbols.

use num_bigint::BigInt;
use num_traits::{One, Pow};

pub fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Prime factorization of `|n|` as `(p, e)` pairs in ascending order.
pub fn factorize(n: u128) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p: u128 = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

pub fn ord_u(mut n: u128, p: u64) -> u32 {
    assert!(n != 0);
    let p = p as u128;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Sum of `d^k` over the positive divisors of `n`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    assert!(n >= 1, "sigma needs n >= 1");
    let mut total = BigInt::one();
    for (p, e) in factorize(n as u128) {
        // 1 + p^k + ... + p^{ek}
        let pk: BigInt = Pow::pow(&BigInt::from(p), k);
        let mut term = BigInt::one();
        let mut s = BigInt::one();
        for _ in 0..e {
            term *= &pk;
            s += &term;
        }
        total *= s;
    }
    total
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i128, n: i128) -> i32 {
    assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)` for arbitrary integers.
pub fn kronecker(d: i128, n: i128) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut t = 1;
    if n < 0 {
        n = -n;
        if d < 0 {
            t = -t;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if (r == 3 || r == 5) && v % 2 == 1 {
            t = -t;
        }
    }
    t * jacobi(d, n)
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n as u128).iter().all(|&(_, e)| e == 1)
}

pub fn big_pow(base: u64, e: u32) -> BigInt {
    Pow::pow(&BigInt::from(base), e)
}

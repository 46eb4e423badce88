//! Level-`N` local densities as exact polynomials in the bridge variable.
//!
//! For a character `R` of `Her_n(O)/q^N`, the normalized Gauss sum of the hyperbolic plane
//! is `index(R)^{-1}`, where `index(R) = [O^n : {x : R x in O^n}]`, and for the identity form
//! at an unramified prime it is `(chi(q) q^{-1})^{e}` with `index(R) = q^{2e}`. Grouping the
//! characters by `e` therefore gives `alpha_N = sum_e b_e Z^e` with `Z = q^{-2k}` resp.
//! `Z = chi(q)^k q^{-k}`, and the coefficients `b_e` with `e <= N` no longer depend on `N`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::arith::ExactRational;
use crate::error::{Error, Result};
use crate::hermitian::{AlgebraicInteger, SemiIntegralHermitian};

use super::residue::{Limits, ResidueGroup};

/// `b_0 .. b_{nN}` at a fixed level; only `b_0 .. b_N` are level-independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityPolynomial {
    pub q: u64,
    pub level: u32,
    pub coeffs: Vec<ExactRational>,
}

impl DensityPolynomial {
    pub fn eval(&self, z: &ExactRational) -> ExactRational {
        self.coeffs.iter().rev().fold(ExactRational::zero(), |acc, c| acc * z + c.clone())
    }

    /// Coefficients that are stable under raising the level.
    pub fn stable(&self) -> &[ExactRational] {
        let n = (self.level as usize + 1).min(self.coeffs.len());
        &self.coeffs[..n]
    }
}

/// Multiplication by `a` on `O` in the basis `{1, omega}`.
fn mult_matrix(a: AlgebraicInteger, d: i64) -> [[i64; 2]; 2] {
    let nw = (d * d + d) / 4;
    [[a.x, -nw * a.y], [a.y, a.x - d * a.y]]
}

fn valuation(mut x: i64, q: i64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % q == 0 && v < cap {
        x /= q;
        v += 1;
    }
    v
}

fn inverse_mod(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(m), m, 1i64, 0i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

/// `log_q #{x in (Z/q^N)^r : A x = 0}` by elimination over the local ring `Z/q^N`.
pub fn kernel_exponent(mut a: Vec<Vec<i64>>, q: u64, level: u32) -> u32 {
    let q = q as i64;
    let m = q.pow(level);
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(m);
        }
    }
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut total = 0;
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, &x) in row.iter().enumerate().skip(r) {
                let v = valuation(x, q, level);
                if v < level && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        a.swap(r, i);
        for row in a.iter_mut() {
            row.swap(r, j);
        }
        let qv = q.pow(v);
        let uinv = inverse_mod(a[r][r] / qv, m);
        for i in r + 1..rows {
            if a[i][r] == 0 {
                continue;
            }
            let f = (a[i][r] / qv) * uinv % m;
            for c in r..cols {
                a[i][c] = (a[i][c] - f * a[r][c]).rem_euclid(m);
            }
        }
        total += v;
        r += 1;
    }
    // every unresolved coordinate is free
    total + (cols - r) as u32 * level
}

/// `e(R)` with `index(R) = q^{2e}` for every character of the residue group.
fn index_table(group: &ResidueGroup) -> Arc<Vec<u8>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64, u32, usize), Arc<Vec<u8>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (group.disc, group.q, group.level, group.n);
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return t.clone();
    }
    let n = group.n;
    let d = group.disc as i64;
    let level = group.level;
    let table: Vec<u8> = (0..group.size())
        .into_par_iter()
        .map(|idx| {
            let c = group.decode(idx);
            let mut entries = vec![vec![AlgebraicInteger::ZERO; n]; n];
            for j in 0..n {
                entries[j][j] = AlgebraicInteger::new(c[j] as i64, 0);
            }
            let mut p = n;
            for j in 0..n {
                for l in j + 1..n {
                    let r = AlgebraicInteger::new(c[p] as i64, c[p + 1] as i64);
                    entries[j][l] = r;
                    entries[l][j] = r.conj(group.disc);
                    p += 2;
                }
            }
            let mut a = vec![vec![0i64; 2 * n]; 2 * n];
            for j in 0..n {
                for l in 0..n {
                    let mm = mult_matrix(entries[j][l], d);
                    for (s, row) in mm.iter().enumerate() {
                        for (t, &x) in row.iter().enumerate() {
                            a[2 * j + s][2 * l + t] = x;
                        }
                    }
                }
            }
            let kernel = kernel_exponent(a, group.q, level);
            let index = 2 * n as u32 * level - kernel;
            assert!(index.is_multiple_of(2), "odd index exponent for a Hermitian character");
            (index / 2) as u8
        })
        .collect();
    let table = Arc::new(table);
    cache.lock().unwrap().insert(key, table.clone());
    table
}

/// Level-`N` density polynomial of `H` (any element of the semi-integral lattice).
pub fn density_polynomial(
    h: &SemiIntegralHermitian,
    q: u64,
    level: u32,
    limits: &Limits,
) -> Result<DensityPolynomial> {
    let n = h.degree();
    let group = ResidueGroup::new(h.disc(), q, level, n, limits)?;
    let table = index_table(&group);
    let m = group.modulus() as i64;
    let disc = h.disc();
    let targets: Vec<AlgebraicInteger> = h.upper().to_vec();
    let diag: Vec<i64> = h.diag().to_vec();
    let max_e = n * level as usize;
    // per exponent: (#{pairing = 0}, #{pairing of exact order q})
    let tallies = (0..group.size())
        .into_par_iter()
        .fold(
            || vec![(0u64, 0u64); max_e + 1],
            |mut acc, idx| {
                let c = group.decode(idx);
                let mut s: i64 = 0;
                for j in 0..n {
                    s += diag[j] * c[j] as i64;
                }
                for (p, t) in targets.iter().enumerate() {
                    let r = AlgebraicInteger::new(c[n + 2 * p] as i64, c[n + 2 * p + 1] as i64);
                    s += t.mul(r.conj(disc), disc).y;
                }
                let s = s.rem_euclid(m);
                let e = table[idx] as usize;
                if s == 0 {
                    acc[e].0 += 1;
                } else if (s * q as i64) % m == 0 {
                    acc[e].1 += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![(0u64, 0u64); max_e + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.0 += y.0;
                    x.1 += y.1;
                }
                a
            },
        );
    let coeffs = tallies
        .into_iter()
        .map(|(t0, t1)| ExactRational::from_integer(t0) - ExactRational::new(t1, q - 1))
        .collect();
    Ok(DensityPolynomial { q, level, coeffs })
}

/// Smallest level whose stable part reaches degree `need`, re-verified one level up.
pub fn stable_coefficients(
    h: &SemiIntegralHermitian,
    q: u64,
    need: usize,
    limits: &Limits,
) -> Result<(Vec<ExactRational>, u32)> {
    let level = (need as u32).max(1);
    let lower = density_polynomial(h, q, level, limits)?;
    let upper = density_polynomial(h, q, level + 1, limits)?;
    if lower.stable() != &upper.stable()[..lower.stable().len()] {
        return Err(Error::NotStabilized { q, max_level: level + 1 });
    }
    Ok((upper.stable().to_vec(), level + 1))
}

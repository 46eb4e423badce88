//! Representation counts `#{X in M_{k,n}(O/q^N) : X* X = H}` by convolution over the group
//! of Hermitian residue matrices.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::numth::big_pow;
use crate::arith::{ExactRational, ImaginaryQuadraticField};
use crate::error::{Error, Result};
use crate::hermitian::{AlgebraicInteger, SemiIntegralHermitian};

use super::rns::{crt, dft_all_axes, moduli_needed, mulmod, ntt_primes, powmod, NttPrime};

/// Feasibility caps for exact local computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Limits {
    /// Largest residue group (or point set) that may be enumerated.
    pub max_group: u64,
    /// Highest modulus level `N` tried during stabilization.
    pub max_level: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_group: 1 << 24, max_level: 10 }
    }
}

/// Hermitian `n x n` matrices over `O/q^N`: `n` diagonal coordinates in `Z/q^N`, then the
/// `{1, omega}` coordinates of each strictly upper entry, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueGroup {
    pub disc: u64,
    pub q: u64,
    pub level: u32,
    pub n: usize,
}

impl ResidueGroup {
    pub fn new(disc: u64, q: u64, level: u32, n: usize, limits: &Limits) -> Result<Self> {
        let g = ResidueGroup { disc, q, level, n };
        let size = (g.modulus() as u128).checked_pow((n * n) as u32);
        match size {
            Some(s) if s <= limits.max_group as u128 => Ok(g),
            _ => Err(Error::Infeasible(format!(
                "residue group for q={q}, N={level}, n={n} exceeds the cap {}",
                limits.max_group
            ))),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q.pow(self.level)
    }

    pub fn axes(&self) -> usize {
        self.n * self.n
    }

    pub fn size(&self) -> usize {
        (self.modulus() as usize).pow(self.axes() as u32)
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        let m = self.modulus();
        coords.iter().fold(0usize, |acc, &c| acc * m as usize + (c % m) as usize)
    }

    pub fn decode(&self, mut index: usize) -> Vec<u64> {
        let m = self.modulus() as usize;
        let mut c = vec![0u64; self.axes()];
        for slot in c.iter_mut().rev() {
            *slot = (index % m) as u64;
            index /= m;
        }
        c
    }

    /// Coordinates of `H` as a residue matrix over `O/q^N`; the off-diagonal entries
    /// `t/sqrt(-D)` must be `q`-integral.
    pub fn target(&self, h: &SemiIntegralHermitian) -> Result<usize> {
        assert_eq!(h.degree(), self.n);
        let m = self.modulus() as i64;
        let d = self.disc as i64;
        let q = self.q as i64;
        let mut coords: Vec<u64> = h.diag().iter().map(|&x| x.rem_euclid(m) as u64).collect();
        let mut v = 0;
        let mut unit = -d;
        while unit % q == 0 {
            unit /= q;
            v += 1;
        }
        let qv = q.pow(v);
        let inv = mod_inverse(unit.rem_euclid(m), m);
        let sqrt_neg_d = AlgebraicInteger::new(d, 2);
        for t in h.upper() {
            let s = t.mul(sqrt_neg_d, self.disc);
            if s.x % qv != 0 || s.y % qv != 0 {
                return Err(Error::RamifiedNonintegral(self.q));
            }
            coords.push(((s.x / qv).rem_euclid(m) * inv % m) as u64);
            coords.push(((s.y / qv).rem_euclid(m) * inv % m) as u64);
        }
        Ok(self.encode(&coords))
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1, mut s0, mut s1) = (a, m, 1i64, 0i64);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
    }
    assert_eq!(r0, 1, "{a} is not invertible mod {m}");
    s0.rem_euclid(m)
}

type GroupKey = (u64, u64, u32, usize);
static HISTOGRAMS: OnceLock<Mutex<HashMap<GroupKey, Arc<Vec<u64>>>>> = OnceLock::new();
type Transforms = Arc<Vec<(NttPrime, Vec<u64>)>>;
static TRANSFORMS: OnceLock<Mutex<HashMap<(GroupKey, usize), Transforms>>> = OnceLock::new();

/// Counts of `y* y` over all columns `y in (O/q^N)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormHistogram {
    pub group: ResidueGroup,
    pub counts: Vec<u64>,
}

impl NormHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Nonzero entries keyed by residue coordinates.
    pub fn support(&self) -> BTreeMap<Vec<u64>, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (self.group.decode(i), c))
            .collect()
    }
}

pub fn norm_histogram(
    field: &ImaginaryQuadraticField,
    q: u64,
    level: u32,
    n: usize,
    limits: &Limits,
) -> Result<NormHistogram> {
    let group = ResidueGroup::new(field.disc(), q, level, n, limits)?;
    let key = (field.disc(), q, level, n);
    if let Some(h) = HISTOGRAMS.get_or_init(Default::default).lock().unwrap().get(&key) {
        return Ok(NormHistogram { group, counts: h.as_ref().clone() });
    }
    let m = group.modulus() as i64;
    let d = field.disc();
    let points = match (m as u128).checked_pow(2 * n as u32) {
        Some(p) if p <= limits.max_group as u128 => p as usize,
        _ => {
            return Err(Error::Infeasible(format!(
                "norm histogram for q={q}, N={level}, n={n} enumerates more than {} points",
                limits.max_group
            )))
        }
    };
    let mut counts = vec![0u64; group.size()];
    let mut y = vec![AlgebraicInteger::ZERO; n];
    let mut coords = vec![0u64; group.axes()];
    for idx in 0..points {
        let mut r = idx;
        for slot in y.iter_mut() {
            let b = (r % m as usize) as i64;
            r /= m as usize;
            let a = (r % m as usize) as i64;
            r /= m as usize;
            *slot = AlgebraicInteger::new(a, b);
        }
        for j in 0..n {
            coords[j] = y[j].norm(d).rem_euclid(m) as u64;
        }
        let mut c = n;
        for j in 0..n {
            for l in j + 1..n {
                let z = y[j].conj(d).mul(y[l], d);
                coords[c] = z.x.rem_euclid(m) as u64;
                coords[c + 1] = z.y.rem_euclid(m) as u64;
                c += 2;
            }
        }
        counts[group.encode(&coords)] += 1;
    }
    HISTOGRAMS.get_or_init(Default::default).lock().unwrap().insert(key, Arc::new(counts.clone()));
    Ok(NormHistogram { group, counts })
}

/// Reference convolution on the residue group, quadratic in the group size.
pub fn convolve_direct(group: &ResidueGroup, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let m = group.modulus();
    let mut out = vec![BigInt::zero(); group.size()];
    let decoded: Vec<Vec<u64>> = (0..group.size()).map(|i| group.decode(i)).collect();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let s: Vec<u64> = decoded[i].iter().zip(&decoded[j]).map(|(x, y)| (x + y) % m).collect();
            out[group.encode(&s)] += ai * bj;
        }
    }
    out
}

/// Transforms of the histogram modulo the first `count` suitable primes.
fn transforms(hist: &NormHistogram, count: usize) -> Transforms {
    let g = hist.group;
    let key = ((g.disc, g.q, g.level, g.n), count);
    let cache = TRANSFORMS.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return t.clone();
    }
    let m = g.modulus();
    let out: Vec<(NttPrime, Vec<u64>)> = ntt_primes(m, g.q, count)
        .into_par_iter()
        .map(|np| {
            let mut data: Vec<u64> = hist.counts.iter().map(|&c| c % np.p).collect();
            dft_all_axes(&mut data, m as usize, g.axes(), np.root, np.p);
            (np, data)
        })
        .collect();
    let out = Arc::new(out);
    cache.lock().unwrap().insert(key, out.clone());
    out
}

/// `k`-fold convolution power of the histogram evaluated at `target`, exactly, via
/// transforms modulo several word-sized primes.
pub fn convolution_power_at(hist: &NormHistogram, k: u32, target: usize) -> BigInt {
    let g = hist.group;
    if k == 0 {
        return BigInt::from((target == 0) as u32);
    }
    let m = g.modulus();
    let bound = big_pow(hist.total(), k);
    let tr = transforms(hist, moduli_needed(&bound));
    let tcoords = g.decode(target);
    let residues: Vec<u64> = tr
        .par_iter()
        .map(|(np, data)| {
            let p = np.p;
            let inv_root = powmod(np.root, m - 1, p);
            let inv_pows: Vec<u64> = (0..m).map(|e| powmod(inv_root, e, p)).collect();
            let mut acc = 0u64;
            for (chi, &v) in data.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                let c = g.decode(chi);
                let pairing = c.iter().zip(&tcoords).map(|(a, b)| a * b % m).sum::<u64>() % m;
                let term = mulmod(powmod(v, k as u64, p), inv_pows[pairing as usize], p);
                acc = (acc + term) % p;
            }
            let size_inv = powmod(g.size() as u64 % p, p - 2, p);
            mulmod(acc, size_inv, p)
        })
        .collect();
    let ps: Vec<u64> = tr.iter().map(|(np, _)| np.p).collect();
    crt(&residues, &ps)
}

/// `A_N = #{X in M_{k,n}(O/q^N) : X* X = H}`.
pub fn representation_count(
    field: &ImaginaryQuadraticField,
    q: u64,
    level: u32,
    k: u32,
    h: &SemiIntegralHermitian,
    limits: &Limits,
) -> Result<BigInt> {
    let n = h.degree();
    let hist = norm_histogram(field, q, level, n, limits)?;
    let target = hist.group.target(h)?;
    Ok(convolution_power_at(&hist, k, target))
}

/// `A_N / q^{N(2kn - n^2)}` at a fixed level.
pub fn density_at_level(
    field: &ImaginaryQuadraticField,
    q: u64,
    level: u32,
    k: u32,
    h: &SemiIntegralHermitian,
    limits: &Limits,
) -> Result<ExactRational> {
    let n = h.degree() as u32;
    let a = representation_count(field, q, level, k, h, limits)?;
    let e = level * (2 * k * n) - level * n * n;
    Ok(ExactRational::new(a, big_pow(q, e)))
}

/// Stabilized identity-form density `alpha_q(1_k, H)` and the level at which two
/// consecutive levels first agree.
pub fn density(
    field: &ImaginaryQuadraticField,
    q: u64,
    k: u32,
    h: &SemiIntegralHermitian,
    limits: &Limits,
) -> Result<(ExactRational, u32)> {
    let start = match h.gamma() {
        Ok(g) => crate::arith::rational::ord_int(&g, q).unwrap_or(0) as u32 + 1,
        Err(_) => 1,
    };
    let mut prev = density_at_level(field, q, start, k, h, limits)?;
    for level in start..limits.max_level {
        let next = density_at_level(field, q, level + 1, k, h, limits)?;
        if next == prev {
            return Ok((prev, level));
        }
        prev = next;
    }
    Err(Error::NotStabilized { q, max_level: limits.max_level })
}

/// Stabilized densities of one `H` for a range of `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityProfile {
    pub q: u64,
    pub key: String,
    /// `k -> (alpha, stabilization level)`.
    pub values: BTreeMap<u32, (ExactRational, u32)>,
}

pub fn density_profile(
    field: &ImaginaryQuadraticField,
    q: u64,
    ks: std::ops::RangeInclusive<u32>,
    h: &SemiIntegralHermitian,
    limits: &Limits,
) -> Result<DensityProfile> {
    let mut values = BTreeMap::new();
    for k in ks {
        values.insert(k, density(field, q, k, h, limits)?);
    }
    Ok(DensityProfile { q, key: h.canonical_key(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn k(d: u64) -> ImaginaryQuadraticField {
        ImaginaryQuadraticField::new(d).unwrap()
    }

    #[test]
    fn histogram_examples() {
        let lim = Limits::default();
        let h = norm_histogram(&k(4), 3, 1, 1, &lim).unwrap();
        assert_eq!(h.counts, vec![1, 4, 4]);
        let h = norm_histogram(&k(4), 5, 1, 1, &lim).unwrap();
        assert_eq!(h.counts, vec![9, 4, 4, 4, 4]);
        for (d, q, level, n) in [(4, 2, 3, 1), (3, 7, 1, 2), (8, 3, 1, 2), (4, 3, 2, 1)] {
            let h = norm_histogram(&k(d), q, level, n, &lim).unwrap();
            assert_eq!(h.total(), (q.pow(level)).pow(2 * n as u32));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let lim = Limits { max_group: 1000, max_level: 5 };
        assert!(matches!(norm_histogram(&k(4), 3, 2, 2, &lim), Err(Error::Infeasible(_))));
        assert!(matches!(norm_histogram(&k(4), 7, 2, 1, &lim), Err(Error::Infeasible(_))));
    }

    #[test]
    fn count_examples() {
        let lim = Limits::default();
        let one = SemiIntegralHermitian::diagonal(k(4), vec![1]);
        let zero = SemiIntegralHermitian::diagonal(k(4), vec![0]);
        assert_eq!(representation_count(&k(4), 3, 1, 1, &one, &lim).unwrap(), BigInt::from(4));
        assert_eq!(representation_count(&k(4), 3, 1, 2, &zero, &lim).unwrap(), BigInt::from(33));
    }

    #[test]
    fn transform_matches_direct_convolution() {
        let lim = Limits::default();
        for (d, q, level, n, kk) in [(4u64, 3u64, 1u32, 2usize, 3u32), (7, 3, 1, 2, 2), (4, 2, 3, 1, 4), (4, 5, 1, 1, 5)] {
            let hist = norm_histogram(&k(d), q, level, n, &lim).unwrap();
            let g = hist.group;
            let base: Vec<BigInt> = hist.counts.iter().map(|&c| BigInt::from(c)).collect();
            let mut acc = base.clone();
            for _ in 1..kk {
                acc = convolve_direct(&g, &acc, &base);
            }
            for t in 0..g.size() {
                assert_eq!(convolution_power_at(&hist, kk, t), acc[t], "D={d} q={q} t={t}");
            }
        }
    }

    #[test]
    fn convolution_is_additive_in_k() {
        let lim = Limits::default();
        let hist = norm_histogram(&k(4), 3, 1, 2, &lim).unwrap();
        let g = hist.group;
        let k1: Vec<BigInt> = (0..g.size()).map(|t| convolution_power_at(&hist, 1, t)).collect();
        let k2: Vec<BigInt> = (0..g.size()).map(|t| convolution_power_at(&hist, 2, t)).collect();
        let k3 = convolve_direct(&g, &k1, &k2);
        for t in (0..g.size()).step_by(7) {
            assert_eq!(convolution_power_at(&hist, 3, t), k3[t]);
        }
    }

    #[test]
    fn density_examples() {
        let lim = Limits::default();
        let one = SemiIntegralHermitian::diagonal(k(4), vec![1]);
        assert_eq!(density(&k(4), 3, 1, &one, &lim).unwrap().0, ExactRational::new(4, 3));
        assert_eq!(density(&k(4), 5, 1, &one, &lim).unwrap().0, ExactRational::new(4, 5));
        let (a, _) = density(&k(4), 3, 2, &SemiIntegralHermitian::identity(k(4), 2), &lim).unwrap();
        let mut den = a.denom().to_u64().unwrap();
        while den % 3 == 0 {
            den /= 3;
        }
        assert_eq!(den, 1);
    }

    #[test]
    fn counts_are_bounded() {
        let lim = Limits::default();
        let h = SemiIntegralHermitian::binary(k(4), 1, 2, AlgebraicInteger::new(2, 1));
        let a = representation_count(&k(4), 3, 1, 3, &h, &lim).unwrap();
        assert!(a >= BigInt::zero() && a <= big_pow(3, 12));
    }

    #[test]
    fn nonintegral_target_at_ramified_prime() {
        let lim = Limits::default();
        // h12 = 1/2 is not integral at 2
        let h = SemiIntegralHermitian::binary(k(4), 1, 2, AlgebraicInteger::new(2, 1));
        assert!(matches!(representation_count(&k(4), 2, 1, 2, &h, &lim), Err(Error::RamifiedNonintegral(2))));
        // h12 = 1 is
        let h = SemiIntegralHermitian::binary(k(4), 1, 2, AlgebraicInteger::new(4, 2));
        assert!(representation_count(&k(4), 2, 1, 2, &h, &lim).is_ok());
    }
}

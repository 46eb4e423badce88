//! Semi-integral Hermitian matrices `H` in `Lambda_m(O_K)`.

use std::fmt;

use num_bigint::BigInt;

use crate::arith::{ExactRational, ImaginaryQuadraticField};
use crate::error::{Error, Result};

use super::algebraic::{AlgebraicInteger, KElem};

/// A Hermitian matrix with integer diagonal whose off-diagonal entries are stored as
/// `t_jl = sqrt(-D) h_jl` in `O_K`, so lattice membership holds by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemiIntegralHermitian {
    field: ImaginaryQuadraticField,
    diag: Vec<i64>,
    /// `t_jl` for `j < l`, row-major: (0,1), (0,2), ..., (1,2), ...
    upper: Vec<AlgebraicInteger>,
}

pub(crate) fn pair_index(m: usize, j: usize, l: usize) -> usize {
    debug_assert!(j < l && l < m);
    // entries before row j: sum_{r<j} (m - 1 - r)
    j * (2 * m - j - 1) / 2 + (l - j - 1)
}

impl SemiIntegralHermitian {
    pub fn new(
        field: ImaginaryQuadraticField,
        diag: Vec<i64>,
        upper: Vec<AlgebraicInteger>,
    ) -> Result<Self> {
        let m = diag.len();
        if upper.len() != m * m.saturating_sub(1) / 2 {
            return Err(Error::InvalidArgument(format!(
                "degree {m} needs {} off-diagonal entries, got {}",
                m * m.saturating_sub(1) / 2,
                upper.len()
            )));
        }
        Ok(SemiIntegralHermitian { field, diag, upper })
    }

    pub fn diagonal(field: ImaginaryQuadraticField, diag: Vec<i64>) -> Self {
        let m = diag.len();
        SemiIntegralHermitian { field, diag, upper: vec![AlgebraicInteger::ZERO; m * m.saturating_sub(1) / 2] }
    }

    pub fn identity(field: ImaginaryQuadraticField, m: usize) -> Self {
        Self::diagonal(field, vec![1; m])
    }

    pub fn zero(field: ImaginaryQuadraticField, m: usize) -> Self {
        Self::diagonal(field, vec![0; m])
    }

    /// Degree-2 matrix from `h11`, `h22` and the lattice coordinate of `h12`.
    pub fn binary(field: ImaginaryQuadraticField, h11: i64, h22: i64, t12: AlgebraicInteger) -> Self {
        SemiIntegralHermitian { field, diag: vec![h11, h22], upper: vec![t12] }
    }

    pub fn field(&self) -> &ImaginaryQuadraticField {
        &self.field
    }

    pub fn disc(&self) -> u64 {
        self.field.disc()
    }

    pub fn degree(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[i64] {
        &self.diag
    }

    pub fn upper(&self) -> &[AlgebraicInteger] {
        &self.upper
    }

    /// `t_jl` for `j < l`.
    pub fn scaled_entry(&self, j: usize, l: usize) -> AlgebraicInteger {
        self.upper[pair_index(self.degree(), j, l)]
    }

    pub fn entry(&self, j: usize, l: usize) -> KElem {
        let d = self.disc();
        match j.cmp(&l) {
            std::cmp::Ordering::Equal => KElem::real(ExactRational::from_integer(self.diag[j])),
            std::cmp::Ordering::Less => KElem::from_scaled(self.scaled_entry(j, l), d),
            std::cmp::Ordering::Greater => KElem::from_scaled(self.scaled_entry(l, j), d).conj(),
        }
    }

    fn matrix(&self, size: usize) -> Vec<Vec<KElem>> {
        (0..size).map(|j| (0..size).map(|l| self.entry(j, l)).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.diag.iter().all(|&h| h == 0) && self.upper.iter().all(|t| t.is_zero())
    }

    /// Pad with a zero last row and column.
    pub fn embed_zero_block(&self) -> Self {
        let m = self.degree();
        let mut upper = Vec::with_capacity((m + 1) * m / 2);
        for j in 0..m {
            for l in j + 1..m {
                upper.push(self.scaled_entry(j, l));
            }
            upper.push(AlgebraicInteger::ZERO);
        }
        let mut diag = self.diag.clone();
        diag.push(0);
        SemiIntegralHermitian { field: self.field, diag, upper }
    }

    /// Leading `r x r` block.
    pub fn leading_block(&self, r: usize) -> Self {
        let mut upper = Vec::new();
        for j in 0..r {
            for l in j + 1..r {
                upper.push(self.scaled_entry(j, l));
            }
        }
        SemiIntegralHermitian { field: self.field, diag: self.diag[..r].to_vec(), upper }
    }

    /// If every row and column past the leading `r x r` block is zero, returns `r` minimal.
    pub fn zero_padding_split(&self) -> usize {
        let m = self.degree();
        let mut r = m;
        while r > 0 {
            let j = r - 1;
            let row_zero = self.diag[j] == 0
                && (0..m).filter(|&l| l != j).all(|l| {
                    let (a, b) = if j < l { (j, l) } else { (l, j) };
                    self.scaled_entry(a, b).is_zero()
                });
            if !row_zero {
                break;
            }
            r -= 1;
        }
        r
    }

    pub fn det(&self) -> ExactRational {
        det_of(self.matrix(self.degree()), self.disc())
    }

    /// Rank over `K` by exact elimination.
    pub fn rank(&self) -> usize {
        let d = self.disc();
        let mut a = self.matrix(self.degree());
        let m = a.len();
        let mut rank = 0;
        for col in 0..m {
            let Some(piv) = (rank..m).find(|&r| !a[r][col].is_zero()) else { continue };
            a.swap(rank, piv);
            let inv = a[rank][col].inv(d);
            for r in 0..m {
                if r != rank && !a[r][col].is_zero() {
                    let f = a[r][col].mul(&inv, d);
                    for c in col..m {
                        let sub = f.mul(&a[rank][c], d);
                        a[r][c] = a[r][c].clone() - sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_positive_definite(&self) -> bool {
        let d = self.disc();
        (1..=self.degree()).all(|r| det_of(self.matrix(r), d).is_positive())
    }

    /// `(-D)^{floor(m/2)} det(H)`, an integer for nondegenerate `H`.
    pub fn gamma(&self) -> Result<BigInt> {
        let m = self.degree();
        let det = self.det();
        if det.is_zero() {
            return Err(Error::RankDeficient { rank: self.rank(), degree: m });
        }
        let g = ExactRational::from_integer(-(self.disc() as i64)).pow((m / 2) as i32) * det;
        g.to_integer()
            .ok_or_else(|| Error::Integrality(format!("gamma({}) = {g} is not an integer", self.canonical_key())))
    }

    /// `"m;d_1,...,d_m;x_12,y_12;x_13,y_13;..."`.
    pub fn canonical_key(&self) -> String {
        let diag: Vec<String> = self.diag.iter().map(|h| h.to_string()).collect();
        let mut key = format!("{};{}", self.degree(), diag.join(","));
        for t in &self.upper {
            key.push_str(&format!(";{},{}", t.x, t.y));
        }
        key
    }

    pub fn parse_key(field: ImaginaryQuadraticField, key: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad matrix key {key:?}"));
        let key = key.replace('\u{2212}', "-");
        let mut parts = key.split(';').map(str::trim);
        let m: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let diag_part = parts.next().ok_or_else(bad)?;
        let diag: Vec<i64> = if m == 0 && diag_part.is_empty() {
            Vec::new()
        } else {
            diag_part.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        if diag.len() != m {
            return Err(bad());
        }
        let mut upper = Vec::new();
        for p in parts {
            let (x, y) = p.split_once(',').ok_or_else(bad)?;
            upper.push(AlgebraicInteger::new(
                x.trim().parse().map_err(|_| bad())?,
                y.trim().parse().map_err(|_| bad())?,
            ));
        }
        Self::new(field, diag, upper)
    }
}

impl fmt::Display for SemiIntegralHermitian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

fn det_of(mut a: Vec<Vec<KElem>>, d: u64) -> ExactRational {
    let m = a.len();
    let mut det = KElem::one();
    for col in 0..m {
        let Some(piv) = (col..m).find(|&r| !a[r][col].is_zero()) else {
            return ExactRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det = det.mul(&a[col][col], d);
        let inv = a[col][col].inv(d);
        for r in col + 1..m {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].mul(&inv, d);
            for c in col..m {
                let sub = f.mul(&a[col][c], d);
                a[r][c] = a[r][c].clone() - sub;
            }
        }
    }
    debug_assert!(det.im.is_zero(), "Hermitian determinant must be real");
    det.re
}

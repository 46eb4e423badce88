use crate::arith::ImaginaryQuadraticField;
use crate::error::{Error, Result};

use super::algebraic::AlgebraicInteger;
use super::matrix::SemiIntegralHermitian;

/// Lattice coordinates `t` with `norm(t) < bound`, sorted by `(x, y)`.
pub fn coordinates_below(d: u64, bound: i64) -> Vec<AlgebraicInteger> {
    if bound <= 0 {
        return Vec::new();
    }
    let di = d as i64;
    // norm = (x - D y/2)^2 + D y^2 / 4
    let ymax = ((4 * bound) as f64 / d as f64).sqrt() as i64 + 1;
    let xr = (bound as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for y in -ymax..=ymax {
        let centre = di * y / 2;
        for x in centre - xr - 1..=centre + xr + 1 {
            let t = AlgebraicInteger::new(x, y);
            if t.norm(d) < bound {
                out.push(t);
            }
        }
    }
    out.sort();
    out
}

/// Positive definite `H` of degree 1 or 2 with diagonal entries at most `max_diag`
/// (and `h_11 <= h_22`), in lexicographic order of `(h_11, h_22, x, y)`.
///
/// Equivalent matrices are not identified.
pub fn enumerate_positive(
    field: ImaginaryQuadraticField,
    m: usize,
    max_diag: i64,
) -> Result<Vec<SemiIntegralHermitian>> {
    match m {
        1 => Ok((1..=max_diag).map(|h| SemiIntegralHermitian::diagonal(field, vec![h])).collect()),
        2 => {
            let d = field.disc();
            let mut out = Vec::new();
            for h11 in 1..=max_diag {
                for h22 in h11..=max_diag {
                    for t in coordinates_below(d, d as i64 * h11 * h22) {
                        let h = SemiIntegralHermitian::binary(field, h11, h22, t);
                        debug_assert!(h.is_positive_definite());
                        out.push(h);
                    }
                }
            }
            Ok(out)
        }
        _ => Err(Error::InvalidArgument(format!("enumeration supports degrees 1 and 2, not {m}"))),
    }
}

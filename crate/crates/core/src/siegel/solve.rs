use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::ExactRational;
use crate::error::{Error, Result};
use crate::hermitian::SemiIntegralHermitian;

use super::bridge::{calibrate_bridge, BridgeForm};
use super::gauss::stable_coefficients;
use super::polynomial::{
    complete_by_functional_equation, free_indices, functional_equation_holds, local_invariants, SiegelPolynomial,
};
use super::polynomial::fq_rank1;
use super::residue::Limits;

/// How a local polynomial was determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// `ord_q(gamma) = 0`.
    Trivial,
    /// Fixed by the functional equation and `c_0 = 1`.
    Forced,
    /// From local densities through the calibrated bridge.
    Density(BridgeForm),
    /// Degree one: the truncated geometric sum in `chi(q)`.
    ClosedForm,
}

impl Route {
    /// Short stable tag: `trivial`, `forced`, `density:<form>`.
    pub fn tag(&self) -> &'static str {
        match self {
            Route::Trivial => "trivial",
            Route::Forced => "forced",
            Route::Density(BridgeForm::Identity { twisted: false }) => "density:identity",
            Route::Density(BridgeForm::Identity { twisted: true }) => "density:identity-twisted",
            Route::Density(BridgeForm::Hyperbolic) => "density:hyperbolic",
            Route::ClosedForm => "closed-form",
        }
    }

    pub fn from_tag(s: &str) -> Option<Route> {
        [
            Route::Trivial,
            Route::Forced,
            Route::Density(BridgeForm::Identity { twisted: false }),
            Route::Density(BridgeForm::Identity { twisted: true }),
            Route::Density(BridgeForm::Hyperbolic),
            Route::ClosedForm,
        ]
        .into_iter()
        .find(|r| r.tag() == s)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::Trivial => f.write_str("(a) trivial"),
            Route::Forced => f.write_str("(b) forced"),
            Route::Density(form) => write!(f, "(c) density [{form}]"),
            Route::ClosedForm => f.write_str("(d) closed form"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub poly: SiegelPolynomial,
    pub route: Route,
}

/// `F_q(H, X)` for nondegenerate `H` of degree 1 or 2, preferring the cheapest route.
pub fn fq_solve(h: &SemiIntegralHermitian, q: u64, limits: &Limits) -> Result<Solved> {
    let n = h.degree();
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidArgument(format!("fq_solve handles degrees 1 and 2, not {n}")));
    }
    let (xi, d) = local_invariants(h, q)?;
    if d == 0 {
        return Ok(Solved { poly: SiegelPolynomial::one(q), route: Route::Trivial });
    }
    if free_indices(d, xi, n).is_empty() {
        let c = complete_by_functional_equation(q, &[BigInt::one()], d, xi, n)?;
        return Ok(Solved { poly: SiegelPolynomial::new(q, c)?, route: Route::Forced });
    }
    if n == 1 {
        let poly = fq_rank1(h.diag()[0] as u64, q);
        return Ok(Solved { poly, route: Route::ClosedForm });
    }
    fq_density(h, q, limits)
}

/// `F_q(H, X)` through the density route regardless of forcing, verified against the
/// functional equation.
pub fn fq_density(h: &SemiIntegralHermitian, q: u64, limits: &Limits) -> Result<Solved> {
    let n = h.degree();
    let (xi, d) = local_invariants(h, q)?;
    let bridge = calibrate_bridge(h.field(), q, limits)?;
    let coeffs = if n == 1 {
        // interpolate through (Z_k, alpha_k / u_k) for d + 1 values of k
        let first = 2 * n as u32 + 1;
        let mut points = Vec::with_capacity(d + 1);
        for k in first..=first + d as u32 {
            let alpha = bridge.density(h.field(), k, h, limits)?;
            points.push((bridge.point(k), alpha / bridge.factor(n, k)));
        }
        interpolate(&points)
    } else {
        let u = bridge.factor_polynomial(n).ok_or_else(|| Error::BridgeCalibrationFailed {
            q,
            details: format!("bridge [{}] is not polynomial in its evaluation point", bridge.form),
        })?;
        let need = free_indices(d, xi, n).last().copied().unwrap_or(0);
        let (b, _) = stable_coefficients(h, q, need, limits)?;
        // c = b / u as power series, up to the highest free index
        let mut c: Vec<ExactRational> = Vec::with_capacity(need + 1);
        for i in 0..=need {
            let mut v = b[i].clone();
            for (j, uj) in u.iter().enumerate().skip(1).take(i) {
                v = v - ExactRational::from_integer(uj.clone()) * &c[i - j];
            }
            c.push(v);
        }
        let low = to_integers(q, &c)?;
        let full = complete_by_functional_equation(q, &low, d, xi, n)?;
        // every stable density coefficient must agree with u * F
        let product = multiply(&u, &full);
        for (i, bi) in b.iter().enumerate() {
            let pi = product.get(i).cloned().unwrap_or_default();
            if ExactRational::from_integer(pi) != *bi {
                return Err(Error::FqInconsistent {
                    q,
                    details: format!(
                        "H={h}: density coefficient {i} is {bi}, functional-equation completion {} predicts otherwise",
                        join(&full)
                    ),
                });
            }
        }
        full.into_iter().map(ExactRational::from_integer).collect()
    };
    let ints = to_integers(q, &coeffs)?;
    let mut ints = ints;
    ints.resize(d + 1, BigInt::zero());
    if ints.len() != d + 1 || !ints[0].is_one() {
        return Err(Error::FqInconsistent { q, details: format!("H={h}: density route gave {}", join(&ints)) });
    }
    let poly = SiegelPolynomial::new(q, ints)?;
    if !functional_equation_holds(&poly, xi, n) {
        let forced = complete_by_functional_equation(q, &poly.coeffs()[..d / 2 + 1], d, xi, n)
            .map(|c| join(&c))
            .unwrap_or_else(|e| e.to_string());
        return Err(Error::FqInconsistent {
            q,
            details: format!("H={h}: density route {} vs functional equation {forced}", join(poly.coeffs())),
        });
    }
    Ok(Solved { poly, route: Route::Density(bridge.form) })
}

fn join(c: &[BigInt]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn to_integers(q: u64, c: &[ExactRational]) -> Result<Vec<BigInt>> {
    c.iter()
        .map(|x| x.to_integer().ok_or_else(|| Error::FqInconsistent { q, details: format!("non-integral coefficient {x}") }))
        .collect()
}

fn multiply(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of the unique polynomial of degree `< points.len()` through `points`.
pub fn interpolate(points: &[(ExactRational, ExactRational)]) -> Vec<ExactRational> {
    let n = points.len();
    let mut result = vec![ExactRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (X - x_j) / (x_i - x_j)
        let mut basis = vec![ExactRational::one()];
        let mut denom = ExactRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut next = vec![ExactRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] = &next[k + 1] + b;
                next[k] = &next[k] - &(b * xj);
            }
            basis = next;
            denom = denom * (xi - xj);
        }
        let scale = yi / &denom;
        for (r, b) in result.iter_mut().zip(basis) {
            *r = &*r + &(b * &scale);
        }
    }
    result
}

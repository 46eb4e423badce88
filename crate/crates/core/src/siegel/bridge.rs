//! Calibration of the relation between local densities and `F_q`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::numth::big_pow;
use crate::arith::{ExactRational, ImaginaryQuadraticField};
use crate::error::{Error, Result};
use crate::hermitian::SemiIntegralHermitian;

use super::gauss::density_polynomial;
use super::polynomial::fq_rank1;
use super::residue::{density, Limits};

/// Which representing form and evaluation point realize `alpha = u * F_q(H, Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BridgeForm {
    /// `k` copies of the norm form, `Z = q^{-k}` or, twisted, `Z = chi(q)^k q^{-k}`.
    Identity { twisted: bool },
    /// `k` hyperbolic planes, `Z = q^{-2k}`.
    Hyperbolic,
}

impl fmt::Display for BridgeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BridgeForm::Identity { twisted: false } => f.write_str("identity, t = q^-k"),
            BridgeForm::Identity { twisted: true } => f.write_str("identity, t = chi(q)^k q^-k"),
            BridgeForm::Hyperbolic => f.write_str("hyperbolic, X = q^-2k"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeParameters {
    pub disc: u64,
    pub q: u64,
    pub chi_q: i32,
    pub form: BridgeForm,
    /// Battery entries `h` that were checked.
    pub battery: Vec<u64>,
    /// Battery entries skipped because they exceed the feasibility caps.
    pub skipped: Vec<u64>,
}

fn signed_pow(base: i32, e: u32) -> i64 {
    // 0^0 = 1
    (base as i64).pow(e)
}

impl BridgeParameters {
    /// The evaluation point for `k` copies of the representing form.
    pub fn point(&self, k: u32) -> ExactRational {
        let q = self.q;
        match self.form {
            BridgeForm::Identity { twisted } => {
                let sign = if twisted { signed_pow(self.chi_q, k) } else { 1 };
                ExactRational::new(sign, big_pow(q, k))
            }
            BridgeForm::Hyperbolic => ExactRational::new(1, big_pow(q, 2 * k)),
        }
    }

    /// The Euler factor `u_{q,k,n}`.
    pub fn factor(&self, n: usize, k: u32) -> ExactRational {
        let q = self.q as i64;
        (0..n as u32)
            .map(|i| match self.form {
                BridgeForm::Identity { .. } => {
                    // 1 - chi(q)^{k-i} q^{i-k}
                    let c = if i < k { signed_pow(self.chi_q, k - i) } else { 1 };
                    ExactRational::one() - ExactRational::from_integer(c) * ExactRational::from_integer(q).pow(i as i32 - k as i32)
                }
                BridgeForm::Hyperbolic => {
                    ExactRational::one() - ExactRational::from_integer(signed_pow(self.chi_q, i) * q.pow(i)) * self.point(k)
                }
            })
            .product()
    }

    /// `u` as a polynomial in the evaluation point, when it is one: `prod_{i<n} (1 - chi^i q^i Z)`.
    pub fn factor_polynomial(&self, n: usize) -> Option<Vec<BigInt>> {
        let polynomial = match self.form {
            BridgeForm::Hyperbolic => true,
            BridgeForm::Identity { twisted } => self.chi_q == 1 || (twisted && self.chi_q == -1),
        };
        if !polynomial {
            return None;
        }
        let mut u = vec![BigInt::from(1)];
        for i in 0..n as u32 {
            let c = BigInt::from(signed_pow(self.chi_q, i)) * big_pow(self.q, i);
            let mut next = vec![BigInt::zero(); u.len() + 1];
            for (j, a) in u.iter().enumerate() {
                next[j] += a;
                next[j + 1] -= a * &c;
            }
            u = next;
        }
        Some(u)
    }

    /// Stabilized density of `k` copies of the bridge form at `H`.
    pub fn density(&self, field: &ImaginaryQuadraticField, k: u32, h: &SemiIntegralHermitian, limits: &Limits) -> Result<ExactRational> {
        match self.form {
            BridgeForm::Identity { .. } => Ok(density(field, self.q, k, h, limits)?.0),
            BridgeForm::Hyperbolic => hyperbolic_density(h, self.q, k, limits),
        }
    }
}

/// `alpha_q(P^k, H)` with two consecutive agreeing levels.
pub fn hyperbolic_density(h: &SemiIntegralHermitian, q: u64, k: u32, limits: &Limits) -> Result<ExactRational> {
    let x = ExactRational::new(1, big_pow(q, 2 * k));
    let start = match h.gamma() {
        Ok(g) => crate::arith::rational::ord_int(&g, q).unwrap_or(0) as u32 + 1,
        Err(_) => 1,
    };
    let mut prev = density_polynomial(h, q, start, limits)?.eval(&x);
    for level in start + 1..=limits.max_level {
        let next = density_polynomial(h, q, level, limits)?.eval(&x);
        if next == prev {
            return Ok(prev);
        }
        prev = next;
    }
    Err(Error::NotStabilized { q, max_level: limits.max_level })
}

/// `{1, q, q^2, q^3, a, a q}` with `a` the least integer `> 1` prime to `q`.
pub fn battery(q: u64) -> Vec<u64> {
    let a = if q == 2 { 3 } else { 2 };
    vec![1, q, q * q, q * q * q, a, a * q]
}

const BATTERY_KS: [u32; 3] = [1, 2, 3];

fn try_candidate(
    field: &ImaginaryQuadraticField,
    params: &mut BridgeParameters,
    limits: &Limits,
) -> std::result::Result<(), Vec<String>> {
    let mut bad = Vec::new();
    params.battery.clear();
    params.skipped.clear();
    for h in battery(params.q) {
        let hm = SemiIntegralHermitian::diagonal(*field, vec![h as i64]);
        let f = fq_rank1(h, params.q);
        let mut feasible = true;
        for k in BATTERY_KS {
            match params.density(field, k, &hm, limits) {
                Ok(alpha) => {
                    let predicted = params.factor(1, k) * f.eval(&params.point(k));
                    if alpha != predicted {
                        bad.push(format!("h={h} k={k}: density {alpha}, predicted {predicted}"));
                    }
                }
                Err(Error::Infeasible(_)) | Err(Error::NotStabilized { .. }) => feasible = false,
                Err(e) => bad.push(format!("h={h} k={k}: {e}")),
            }
        }
        if feasible {
            params.battery.push(h);
        } else {
            params.skipped.push(h);
        }
    }
    if params.battery.len() < 2 {
        bad.push(format!("only {} battery points feasible", params.battery.len()));
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

type CalibrationCache = Mutex<HashMap<(u64, u64, Limits), BridgeParameters>>;
static CALIBRATIONS: OnceLock<CalibrationCache> = OnceLock::new();

/// Installs a previously computed calibration (e.g. loaded from disk).
pub fn seed_calibration(params: BridgeParameters, limits: &Limits) {
    let cache = CALIBRATIONS.get_or_init(Default::default);
    cache.lock().unwrap().insert((params.disc, params.q, *limits), params);
}

/// Calibrations computed so far in this process.
pub fn known_calibrations() -> Vec<BridgeParameters> {
    let cache = CALIBRATIONS.get_or_init(Default::default);
    let mut v: Vec<BridgeParameters> = cache.lock().unwrap().values().cloned().collect();
    v.sort_by_key(|p| (p.disc, p.q));
    v.dedup();
    v
}

/// Fits the bridge on rank-one inputs, where `F_q` is known in closed form. Identity-form
/// candidates are tried first, then the hyperbolic form.
pub fn calibrate_bridge(field: &ImaginaryQuadraticField, q: u64, limits: &Limits) -> Result<BridgeParameters> {
    let cache = CALIBRATIONS.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&(field.disc(), q, *limits)) {
        return Ok(p.clone());
    }
    let mut failures = Vec::new();
    for form in [BridgeForm::Identity { twisted: false }, BridgeForm::Identity { twisted: true }, BridgeForm::Hyperbolic] {
        let mut params = BridgeParameters {
            disc: field.disc(),
            q,
            chi_q: field.chi(q as i64),
            form,
            battery: Vec::new(),
            skipped: Vec::new(),
        };
        match try_candidate(field, &mut params, limits) {
            Ok(()) => {
                cache.lock().unwrap().insert((field.disc(), q, *limits), params.clone());
                return Ok(params);
            }
            Err(bad) => failures.push(format!("[{form}] {}", bad.into_iter().take(3).collect::<Vec<_>>().join("; "))),
        }
    }
    Err(Error::BridgeCalibrationFailed { q, details: failures.join(" | ") })
}

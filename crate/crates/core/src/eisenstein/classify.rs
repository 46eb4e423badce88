use num_bigint::BigInt;

use crate::arith::{congruent_mod_p, Congruence, ExactRational};
use crate::error::{Error, Result};

use super::table::FourierTable;

/// Mod-`p` shape of a coefficient table, within the table's bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub singular: bool,
    pub theta_kernel: bool,
    pub essential: bool,
    /// Keys of positive definite entries that are nonzero mod `p`, preferring `gamma(H) = -p`.
    pub witnesses: Vec<String>,
    pub positive_entries: usize,
    /// Positive definite entries skipped as not computable; verdicts hold on the computable subset.
    pub not_computable: usize,
}

pub fn classify_mod_p(t: &FourierTable, p: u64) -> Result<Classification> {
    let mut singular = true;
    let mut theta_kernel = true;
    let mut nonzero: Vec<(String, bool)> = Vec::new();
    let mut positive_entries = 0;
    let mut not_computable = 0;
    let minus_p = BigInt::from(-(p as i64));
    for (key, e) in &t.entries {
        if e.matrix.degree() == 0 || !e.matrix.is_positive_definite() {
            continue;
        }
        let Some(v) = &e.value else {
            not_computable += 1;
            continue;
        };
        positive_entries += 1;
        let zero = match congruent_mod_p(v, &ExactRational::zero(), p) {
            Congruence::Congruent => true,
            Congruence::NotCongruent => false,
            Congruence::NotPIntegral => return Err(Error::NotPIntegral(format!("{key}: {v}"))),
        };
        if zero {
            continue;
        }
        singular = false;
        let gamma = e.matrix.gamma()?;
        if crate::arith::rational::ord_int(&gamma, p) == Some(0) {
            theta_kernel = false;
        }
        nonzero.push((key.clone(), gamma == minus_p));
    }
    let mut witnesses: Vec<String> = nonzero.iter().filter(|(_, w)| *w).map(|(k, _)| k.clone()).collect();
    if witnesses.is_empty() {
        witnesses.extend(nonzero.into_iter().take(1).map(|(k, _)| k));
    }
    Ok(Classification {
        singular,
        theta_kernel,
        essential: theta_kernel && !singular,
        witnesses,
        positive_entries,
        not_computable,
    })
}

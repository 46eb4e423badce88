use std::time::Instant;

use num_bigint::BigInt;

use crate::arith::numth::sigma;
use crate::arith::rational::ord_int;
use crate::arith::{ExactRational, ImaginaryQuadraticField, Valuation};
use crate::eisenstein::{
    build_table, classify_mod_p, compute_cp, eisenstein_coefficient, prefactor_valuation_next_degree, FourierTable,
};
use crate::error::{Error, Result};
use crate::hermitian::SemiIntegralHermitian;
use crate::siegel::bridge::known_calibrations;
use crate::siegel::{fq_solve, seed_calibration, Limits};

use super::cache::Cache;
use super::config::RunConfig;
use super::report::{Hypotheses, VerificationReport};
use super::scalars::{scalar_battery, ScalarRanges};

fn millis(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn open_cache(cfg: &RunConfig) -> Result<Option<Cache>> {
    cfg.cache_dir.as_ref().map(Cache::new).transpose()
}

/// Loads the table from the cache or builds it (and stores it). The flag reports a cache hit.
pub fn load_or_build_table(
    field: &ImaginaryQuadraticField,
    k: u32,
    m: usize,
    max_diag: i64,
    limits: &Limits,
    cache: Option<&Cache>,
) -> Result<(FourierTable, bool)> {
    if let Some(c) = cache {
        if let Some(t) = c.load_table(field, k, m, max_diag, limits) {
            return Ok((t, true));
        }
        for q in crate::arith::numth::primes_up_to(1000) {
            if let Some(p) = c.load_calibration(field.disc(), q, limits) {
                seed_calibration(p, limits);
            }
        }
    }
    let t = build_table(field, k, m, max_diag, limits)?;
    if let Some(c) = cache {
        c.store_table(&t, limits)?;
        for p in known_calibrations().into_iter().filter(|p| p.disc == field.disc()) {
            c.store_calibration(&p, limits)?;
        }
    }
    Ok((t, false))
}

/// The `ord_p(gamma) = 0` congruence scan plus the hunt for an essential witness.
fn scan_degree_two(report: &mut VerificationReport, table: &FourierTable, p: u64) -> Result<()> {
    let mut nontrivial = 0;
    let mut positive = 0;
    for (key, e) in &table.entries {
        if e.matrix.degree() == 0 || !e.matrix.is_positive_definite() {
            continue;
        }
        positive += 1;
        if e.has_nontrivial_local_factor() {
            nontrivial += 1;
        }
        let gamma = e.matrix.gamma()?;
        if ord_int(&gamma, p) != Some(0) {
            continue;
        }
        report.counts.scanned += 1;
        match &e.value {
            None => report.counts.not_computable += 1,
            Some(v) => match v.ordp(p) {
                Valuation::Infinity => report.counts.congruent += 1,
                Valuation::Finite(x) if x >= 1 => report.counts.congruent += 1,
                Valuation::Finite(_) => {
                    report.counts.violations += 1;
                    report.violate(key.clone(), v.to_string(), format!("ord_{p}(a(H)) >= 1 for ord_{p}(gamma) = 0"));
                }
            },
        }
    }
    let nc = table.entries.values().filter(|e| e.value.is_none()).count();
    report.scalars.insert("positive_entries".into(), positive.to_string());
    report.scalars.insert("entries_with_nontrivial_local_factor".into(), nontrivial.to_string());
    report.scalars.insert("not_computable_fraction".into(), format!("{nc}/{}", table.entries.len()));
    match classify_mod_p(table, p) {
        Ok(c) => {
            let minus_p = BigInt::from(-(p as i64));
            report.witnesses = c
                .witnesses
                .iter()
                .filter(|k| table.get(k).and_then(|e| e.matrix.gamma().ok()) == Some(minus_p.clone()))
                .cloned()
                .collect();
            report.scalars.insert("theta_kernel".into(), c.theta_kernel.to_string());
            report.scalars.insert("singular".into(), c.singular.to_string());
            report.scalars.insert("essential".into(), c.essential.to_string());
        }
        Err(Error::NotPIntegral(what)) => {
            report.violate(what, "", format!("p-integrality of the degree-2 table at {p}"));
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn main_gates(cfg: &RunConfig) -> Option<String> {
    let (p, m, d) = (cfg.prime, cfg.degree as u64, cfg.disc);
    if m % 4 != 2 {
        return Some(format!("hypotheses unmet: m = {m} is not 2 mod 4"));
    }
    if p <= m + 3 {
        return Some(format!("hypotheses unmet: p = {p} does not exceed m + 3 = {}", m + 3));
    }
    if d % p == 0 {
        return Some(format!("hypotheses unmet: p = {p} divides D_K = {d}"));
    }
    None
}

/// Degree-`m` congruence `a(G, H) = 0 mod p` for `ord_p(gamma(H)) = 0`, the next-degree
/// prefactor valuation, and an essential witness with `gamma(H) = -p`.
pub fn verify_main(cfg: &RunConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    cfg.validate()?;
    let m = cfg.degree;
    let k = (m as u64 + cfg.prime - 1) as u32;
    let mut report = VerificationReport::new(
        "verify-main",
        Hypotheses { p: cfg.prime, disc: cfg.disc, m, k },
    );
    if let Some(reason) = main_gates(cfg) {
        return Ok(report.inconclusive(reason));
    }
    let field = ImaginaryQuadraticField::new(cfg.disc)?;
    let p = cfg.prime;
    let norm = compute_cp(&field, p, m as u32)?;
    report.scalars.insert("C_p".into(), norm.c_p.to_string());
    if norm.c_p > 0 {
        report.violate("C_p", norm.c_p.to_string(), "C_p <= 0");
    }
    let pv = prefactor_valuation_next_degree(&field, p, m as u32)?;
    report.scalars.insert("prefactor_valuation_next_degree".into(), pv.to_string());
    if pv != 1 {
        report.violate("prefactor", pv.to_string(), "next-degree prefactor valuation = 1");
    }
    report.scalars.insert("local_products_integral".into(), "true".into());
    if m > 2 {
        return Ok(report.inconclusive(format!("degree {m} coefficient tables are not enumerated")));
    }
    let cache = open_cache(cfg)?;
    let t = Instant::now();
    let (table, hit) = load_or_build_table(&field, k, m, cfg.max_diag, &cfg.limits, cache.as_ref())?;
    report.timings_ms.insert("table".into(), millis(t));
    report.scalars.insert("cache_hit".into(), hit.to_string());
    let g = table.scaled(&norm.scale());
    scan_degree_two(&mut report, &g, p)?;
    report.timings_ms.insert("total".into(), millis(start));
    report.conclude();
    Ok(report)
}

fn example_gates(cfg: &RunConfig, field: &ImaginaryQuadraticField) -> Option<String> {
    let p = cfg.prime;
    if p <= 5 {
        return Some(format!("hypotheses unmet: p = {p} is not > 5"));
    }
    if field.chi(p as i64) != -1 {
        return Some(format!("hypotheses unmet: chi_K({p}) = {} is not -1", field.chi(p as i64)));
    }
    if field.class_number().is_multiple_of(p) {
        return Some(format!("hypotheses unmet: p = {p} divides h_K = {}", field.class_number()));
    }
    None
}

/// The worked example: `C_p = 0`, the degree-2 scan at `k = p + 1`, the degree-1
/// statement `sigma_1(h) = 0 mod p => a(E_{p+1}, h) = 0 mod p`, and the degree-3 prefactor.
pub fn verify_example(cfg: &RunConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    cfg.validate()?;
    let p = cfg.prime;
    let k = (p + 1) as u32;
    let mut report = VerificationReport::new("verify-example", Hypotheses { p, disc: cfg.disc, m: 2, k });
    let field = ImaginaryQuadraticField::new(cfg.disc)?;
    if let Some(reason) = example_gates(cfg, &field) {
        return Ok(report.inconclusive(reason));
    }
    let norm = compute_cp(&field, p, 2)?;
    report.scalars.insert("C_p".into(), norm.c_p.to_string());
    if norm.c_p != 0 {
        report.violate("C_p", norm.c_p.to_string(), "C_p = 0");
    }
    let pv = prefactor_valuation_next_degree(&field, p, 2)?;
    report.scalars.insert("prefactor_valuation_next_degree".into(), pv.to_string());
    if pv != 1 {
        report.violate("prefactor", pv.to_string(), "next-degree prefactor valuation = 1");
    }
    let cache = open_cache(cfg)?;
    let t = Instant::now();
    let (table, hit) = load_or_build_table(&field, k, 2, cfg.max_diag, &cfg.limits, cache.as_ref())?;
    report.timings_ms.insert("table".into(), millis(t));
    report.scalars.insert("cache_hit".into(), hit.to_string());
    scan_degree_two(&mut report, &table.scaled(&norm.scale()), p)?;

    // degree one
    let t = Instant::now();
    let (mut triggered, mut converse) = (0usize, true);
    for h in 1..=cfg.max_h {
        let hm = SemiIntegralHermitian::diagonal(field, vec![h as i64]);
        let a = eisenstein_coefficient(&field, k, &hm, &cfg.limits)?.value;
        let divisible = a.ordp(p).at_least(1);
        if (sigma(1, h) % p).bits() == 0 {
            triggered += 1;
            report.counts.scanned += 1;
            if divisible {
                report.counts.congruent += 1;
            } else {
                report.counts.violations += 1;
                report.violate(format!("1;{h}"), a.to_string(), format!("sigma_1(h) = 0 mod {p} => a = 0 mod {p}"));
            }
        } else if divisible {
            converse = false;
        }
    }
    report.timings_ms.insert("degree_one".into(), millis(t));
    report.scalars.insert("degree_one_triggered".into(), triggered.to_string());
    report.scalars.insert("degree_one_converse".into(), converse.to_string());
    report.timings_ms.insert("total".into(), millis(start));
    report.conclude();
    Ok(report)
}

/// `"q; c0,...,cd (route: ...)"` for the matrix with the given key.
pub fn fq_command(cfg: &RunConfig, key: &str, q: u64) -> Result<String> {
    let field = ImaginaryQuadraticField::new(cfg.disc)?;
    let h = SemiIntegralHermitian::parse_key(field, key)?;
    let r = h.zero_padding_split();
    let block = h.leading_block(r);
    if r == 0 || r > 2 || !block.is_positive_definite() {
        return Err(Error::InvalidArgument(format!("{key}: need a positive definite block of size 1 or 2")));
    }
    let route_name = |s: &crate::siegel::Solved| match s.route {
        crate::siegel::Route::Trivial => "trivial".to_string(),
        crate::siegel::Route::Forced => "functional-equation".to_string(),
        crate::siegel::Route::Density(f) => format!("density, {f}"),
        crate::siegel::Route::ClosedForm => "closed-form".to_string(),
    };
    match fq_solve(&block, q, &cfg.limits) {
        Ok(s) => Ok(format!("{} (route: {})", s.poly, route_name(&s))),
        Err(e) if crate::eisenstein::coefficient::is_not_computable(&e) => Ok(format!("not-computable: {e}")),
        Err(e) => Err(e),
    }
}

/// The scalar identity battery as a report.
pub fn scalars_report(cfg: &RunConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report =
        VerificationReport::new("scalars", Hypotheses { p: cfg.prime, disc: cfg.disc, m: cfg.degree, k: 0 });
    for c in scalar_battery(&ScalarRanges::default()) {
        report.counts.scanned += c.checked;
        report.counts.violations += c.failures.len();
        report.counts.congruent += c.checked - c.failures.len();
        report.scalars.insert(c.name.clone(), format!("{} ({} checked)", if c.passed() { "pass" } else { "FAIL" }, c.checked));
        for f in c.failures {
            report.violate(f, "", c.name.clone());
        }
    }
    report.timings_ms.insert("total".into(), millis(start));
    report.conclude();
    report
}

/// Coefficient table of weight `k` (default `m + p - 1`) for the configured field and bound.
pub fn export_table(cfg: &RunConfig, weight: Option<u32>) -> Result<FourierTable> {
    cfg.validate()?;
    let field = ImaginaryQuadraticField::new(cfg.disc)?;
    let k = weight.unwrap_or((cfg.degree as u64 + cfg.prime - 1) as u32);
    let bound = if cfg.degree == 1 { cfg.max_h as i64 } else { cfg.max_diag };
    let cache = open_cache(cfg)?;
    Ok(load_or_build_table(&field, k, cfg.degree, bound, &cfg.limits, cache.as_ref())?.0)
}

/// `ExactRational` helper for report formatting of single values.
pub fn show(v: &ExactRational) -> String {
    v.to_string()
}

//! The scalar identities behind the congruences, checked exactly over finite ranges.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::bernoulli::generalized_bernoulli_by_definition;
use crate::arith::character::count_reduced_forms;
use crate::arith::numth::primes_up_to;
use crate::arith::{
    bernoulli, congruent_mod_p, generalized_bernoulli, is_fundamental, local_character, Congruence, ExactRational,
    ImaginaryQuadraticField,
};
use crate::arith::hilbert::relevant_places;
use crate::eisenstein::compute_cp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarCheck {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ScalarCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarRanges {
    pub max_prime: u64,
    pub max_disc: u64,
    pub hilbert_discs: Vec<u64>,
    pub hilbert_t: i64,
}

impl Default for ScalarRanges {
    fn default() -> Self {
        ScalarRanges { max_prime: 97, max_disc: 200, hilbert_discs: vec![3, 4, 7, 8, 11], hilbert_t: 50 }
    }
}

fn family(name: &str, items: impl Iterator<Item = (String, bool)>) -> ScalarCheck {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (label, ok) in items {
        checked += 1;
        if !ok {
            failures.push(label);
        }
    }
    ScalarCheck { name: name.to_string(), checked, failures }
}

/// `ord_p(B_{p-1}) = -1` and `p B_{p-1} + 1 = 0 mod p`.
pub fn von_staudt_clausen(p: u64) -> bool {
    let b = bernoulli(p as usize - 1);
    let pb = ExactRational::from_integer(p as i64) * &b + ExactRational::one();
    b.ordp(p).finite() == Some(-1) && congruent_mod_p(&pb, &ExactRational::zero(), p) == Congruence::Congruent
}

/// `B_{p+1}/(p+1) = 1/12 mod p`.
pub fn kummer(p: u64) -> bool {
    let lhs = bernoulli(p as usize + 1) / ExactRational::from_integer(p as i64 + 1);
    congruent_mod_p(&lhs, &ExactRational::new(1, 12), p) == Congruence::Congruent
}

/// `B_{1,chi} = -2h/w`, with `B_{1,chi}` from the character sum and `h` from reduced forms.
pub fn b1_class_number(d: u64) -> bool {
    let field = ImaginaryQuadraticField::new(d).expect("fundamental");
    let chi = field.character();
    let rhs = ExactRational::new(-2 * count_reduced_forms(d) as i64, field.unit_order() as i64);
    generalized_bernoulli_by_definition(1, &chi) == rhs && generalized_bernoulli(1, &chi) == rhs
}

/// `B_{p,chi}/p = (1 - chi(p)) B_{1,chi} mod p`.
pub fn kummer_twisted(d: u64, p: u64) -> bool {
    let field = ImaginaryQuadraticField::new(d).expect("fundamental");
    let chi = field.character();
    let lhs = generalized_bernoulli(p as usize, &chi) / ExactRational::from_integer(p as i64);
    let rhs = ExactRational::from_integer(1 - field.chi(p as i64) as i64)
        * ExactRational::new(-2 * field.class_number() as i64, field.unit_order() as i64);
    congruent_mod_p(&lhs, &rhs, p) == Congruence::Congruent
}

pub fn hilbert_product_formula(d: u64, t: i64) -> bool {
    let field = ImaginaryQuadraticField::new(d).expect("fundamental");
    let t = BigInt::from(t);
    relevant_places(&field, &t).into_iter().map(|v| local_character(&field, v, &t)).product::<i32>() == 1
}

pub fn scalar_battery(r: &ScalarRanges) -> Vec<ScalarCheck> {
    let primes = primes_up_to(r.max_prime);
    let discs: Vec<u64> = (3..=r.max_disc).filter(|&d| is_fundamental(d)).collect();
    let small_discs: Vec<u64> = discs.iter().copied().filter(|&d| d <= 24).collect();
    vec![
        family("von-staudt-clausen", primes.iter().map(|&p| (format!("p={p}"), von_staudt_clausen(p)))),
        family("kummer", primes.iter().filter(|&&p| p >= 7).map(|&p| (format!("p={p}"), kummer(p)))),
        family("b1-class-number", discs.iter().map(|&d| (format!("D={d}"), b1_class_number(d)))),
        family(
            "kummer-twisted",
            small_discs.iter().flat_map(|&d| {
                primes
                    .iter()
                    .filter(move |&&p| (5..=43).contains(&p) && d % p != 0)
                    .map(move |&p| (format!("D={d} p={p}"), kummer_twisted(d, p)))
            }),
        ),
        family(
            "hilbert-product-formula",
            r.hilbert_discs.iter().flat_map(|&d| {
                (-r.hilbert_t..=r.hilbert_t)
                    .filter(|&t| t != 0)
                    .map(move |t| (format!("D={d} t={t}"), hilbert_product_formula(d, t)))
            }),
        ),
        family(
            "carlitz-nonpositive",
            small_discs.iter().flat_map(|&d| {
                primes.iter().filter(move |&&p| p > 5 && p <= 31 && d % p != 0).map(move |&p| {
                    let c = compute_cp(&ImaginaryQuadraticField::new(d).unwrap(), p, 2).map(|n| n.c_p);
                    (format!("D={d} p={p} C_p={c:?}"), matches!(c, Ok(v) if v <= 0))
                })
            }),
        ),
    ]
}

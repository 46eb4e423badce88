//! The quadratic character of an imaginary quadratic field, and the field data itself.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

use super::numth::{is_squarefree, kronecker};

/// `true` iff `-d` is a negative fundamental discriminant.
pub fn is_fundamental(d: u64) -> bool {
    if d < 3 {
        return false;
    }
    match d % 4 {
        3 => is_squarefree(d),
        0 => {
            let m = d / 4;
            (m % 4 == 1 || m % 4 == 2) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Kronecker character `a -> (-D/a)` of conductor `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticCharacter {
    conductor: u64,
}

impl QuadraticCharacter {
    pub fn new(d: u64) -> Result<Self> {
        if !is_fundamental(d) {
            return Err(Error::NotFundamental(d));
        }
        Ok(QuadraticCharacter { conductor: d })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn fundamental_discriminant(&self) -> i64 {
        -(self.conductor as i64)
    }

    pub fn value(&self, a: i64) -> i32 {
        kronecker(self.fundamental_discriminant() as i128, a as i128)
    }
}

/// Number of reduced forms `(a,b,c)` with `b^2 - 4ac = -d`.
pub fn count_reduced_forms(d: u64) -> u64 {
    let d = d as i64;
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= d {
        for b in -a..=a {
            let num = b * b + d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count as u64
}

/// Class number of `Q(sqrt(-d))`, cached per discriminant.
pub fn class_number(d: u64) -> Result<u64> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    static CACHE: OnceLock<Mutex<HashMap<u64, u64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&h) = cache.lock().unwrap().get(&d) {
        return Ok(h);
    }
    let h = count_reduced_forms(d);
    cache.lock().unwrap().insert(d, h);
    Ok(h)
}

/// `K = Q(sqrt(-D_K))` with its class number and number of units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ImaginaryQuadraticField {
    d: u64,
    class_number: u64,
    unit_order: u64,
}

impl ImaginaryQuadraticField {
    pub fn new(d: u64) -> Result<Self> {
        let class_number = class_number(d)?;
        let unit_order = match d {
            3 => 6,
            4 => 4,
            _ => 2,
        };
        Ok(ImaginaryQuadraticField { d, class_number, unit_order })
    }

    /// `D_K`, the absolute value of the discriminant.
    pub fn disc(&self) -> u64 {
        self.d
    }

    pub fn class_number(&self) -> u64 {
        self.class_number
    }

    pub fn unit_order(&self) -> u64 {
        self.unit_order
    }

    pub fn character(&self) -> QuadraticCharacter {
        QuadraticCharacter { conductor: self.d }
    }

    pub fn chi(&self, a: i64) -> i32 {
        self.character().value(a)
    }

    pub fn is_ramified(&self, q: u64) -> bool {
        self.d.is_multiple_of(q)
    }
}

//! Elements of `O_K` in the basis `{1, omega}`, `omega = (-D + sqrt(-D))/2`, and exact
//! elements of `K` written as `a + b sqrt(-D)`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::ExactRational;

/// `x + y*omega` in the ring of integers of `Q(sqrt(-d))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AlgebraicInteger {
    pub x: i64,
    pub y: i64,
}

impl AlgebraicInteger {
    pub const ZERO: AlgebraicInteger = AlgebraicInteger { x: 0, y: 0 };
    pub const ONE: AlgebraicInteger = AlgebraicInteger { x: 1, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        AlgebraicInteger { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// `omega * conj(omega)`.
    pub fn omega_norm(d: u64) -> i64 {
        let d = d as i64;
        (d * d + d) / 4
    }

    pub fn add(self, o: Self) -> Self {
        AlgebraicInteger::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Self) -> Self {
        AlgebraicInteger::new(self.x - o.x, self.y - o.y)
    }

    /// Uses `omega^2 = -D omega - (D^2+D)/4`.
    pub fn mul(self, o: Self, d: u64) -> Self {
        let di = d as i64;
        let n = Self::omega_norm(d);
        let yy = self.y * o.y;
        AlgebraicInteger::new(self.x * o.x - n * yy, self.x * o.y + self.y * o.x - di * yy)
    }

    /// `conj(omega) = -D - omega`.
    pub fn conj(self, d: u64) -> Self {
        AlgebraicInteger::new(self.x - d as i64 * self.y, -self.y)
    }

    pub fn norm(self, d: u64) -> i64 {
        let di = d as i64;
        self.x * self.x - di * self.x * self.y + Self::omega_norm(d) * self.y * self.y
    }

    /// Coefficient form `a + b sqrt(-D)`.
    pub fn to_k(self, d: u64) -> KElem {
        KElem {
            re: ExactRational::new(2 * self.x - d as i64 * self.y, 2),
            im: ExactRational::new(self.y, 2),
        }
    }

    /// The `omega`-coefficient, equal to `(z - conj z)/sqrt(-D)`.
    pub fn trace_over_sqrt(self) -> i64 {
        self.y
    }
}

/// `re + im * sqrt(-D)` with rational coordinates; `D` is carried by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KElem {
    pub re: ExactRational,
    pub im: ExactRational,
}

impl KElem {
    pub fn real(r: ExactRational) -> Self {
        KElem { re: r, im: ExactRational::zero() }
    }

    pub fn zero() -> Self {
        KElem::default()
    }

    pub fn one() -> Self {
        KElem::real(ExactRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        KElem { re: self.re.clone(), im: -&self.im }
    }

    pub fn mul(&self, o: &KElem, d: u64) -> KElem {
        let dr = ExactRational::from_integer(d);
        KElem {
            re: &self.re * &o.re - dr * (&self.im * &o.im),
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn norm(&self, d: u64) -> ExactRational {
        &self.re * &self.re + ExactRational::from_integer(d) * (&self.im * &self.im)
    }

    pub fn inv(&self, d: u64) -> KElem {
        let n = self.norm(d);
        assert!(!n.is_zero(), "inverse of zero in K");
        KElem { re: &self.re / &n, im: -(&self.im / &n) }
    }

    /// `t / sqrt(-D)` for a lattice coordinate `t`.
    pub fn from_scaled(t: AlgebraicInteger, d: u64) -> KElem {
        let tk = t.to_k(d);
        let dr = ExactRational::from_integer(d);
        // (a + b s)/s = b - (a/D) s since s^2 = -D
        KElem { re: tk.im.clone(), im: -(tk.re / dr) }
    }
}

impl Add for KElem {
    type Output = KElem;
    fn add(self, o: KElem) -> KElem {
        KElem { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for KElem {
    type Output = KElem;
    fn sub(self, o: KElem) -> KElem {
        KElem { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem { re: -self.re, im: -self.im }
    }
}

impl Mul<&ExactRational> for KElem {
    type Output = KElem;
    fn mul(self, r: &ExactRational) -> KElem {
        KElem { re: self.re * r, im: self.im * r }
    }
}

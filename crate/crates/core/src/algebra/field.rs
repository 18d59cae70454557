use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use super::{rat_f64, QuadSurd, Rational};

/// The minimal field interface shared by the exact and floating engines.
///
/// Method names are prefixed to stay clear of `std::ops` in concrete code.
pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_int(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Embeds an element of Q(√7). Panics for fields that cannot hold √7.
    fn from_surd(s: &QuadSurd) -> Self;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn finv(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact sign for the exact fields.
    fn fsign(&self) -> i32;

    fn fdiv(&self, o: &Self) -> Self {
        self.fmul(&o.finv())
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_surd(s: &QuadSurd) -> Self {
        assert!(Zero::is_zero(&s.b), "irrational value {s} in a rational context");
        s.a.clone()
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn to_f64(&self) -> f64 {
        rat_f64(self)
    }
    fn fsign(&self) -> i32 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Field for QuadSurd {
    fn zero() -> Self {
        QuadSurd::zero()
    }
    fn one() -> Self {
        QuadSurd::one()
    }
    fn is_zero(&self) -> bool {
        QuadSurd::is_zero(self)
    }
    fn from_int(n: i64) -> Self {
        QuadSurd::from_int(n)
    }
    fn from_rational(r: &Rational) -> Self {
        QuadSurd::from_rational(r.clone())
    }
    fn from_surd(s: &QuadSurd) -> Self {
        s.clone()
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        self.inv()
    }
    fn to_f64(&self) -> f64 {
        QuadSurd::to_f64(self)
    }
    fn fsign(&self) -> i32 {
        self.sign()
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &Rational) -> Self {
        rat_f64(r)
    }
    fn from_surd(s: &QuadSurd) -> Self {
        s.to_f64()
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        1.0 / self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn fsign(&self) -> i32 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
}


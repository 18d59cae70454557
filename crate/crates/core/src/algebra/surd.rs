use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{rat_f64, PrecReal, Rational};

/// An element `a + b·√7` of Q(√7).
///
/// The pair (a, b) is canonical because √7 is irrational, so derived equality
/// and hashing are value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadSurd {
    pub a: Rational,
    pub b: Rational,
}

impl QuadSurd {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadSurd { a, b }
    }

    pub fn zero() -> Self {
        QuadSurd::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        QuadSurd::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        QuadSurd::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadSurd::new(a, Rational::zero())
    }

    pub fn sqrt7() -> Self {
        QuadSurd::new(Rational::zero(), Rational::one())
    }

    /// `a + b√7` from small integer fractions.
    pub fn from_ints(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QuadSurd::new(super::rat(an, ad), super::rat(bn, bd))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadSurd::new(self.a.clone(), -&self.b)
    }

    /// Field norm a² − 7b².
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(7.into()) * &self.b * &self.b
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in Q(sqrt7)");
        let n = self.norm();
        QuadSurd::new(&self.a / &n, -&self.b / &n)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadSurd::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadSurd::new(&self.a * r, &self.b * r)
    }

    pub fn sign(&self) -> i32 {
        surd_sign(self)
    }

    pub fn is_positive(&self) -> bool {
        surd_sign(self) > 0
    }

    /// Double-precision value, computed through the conjugate when the two
    /// parts have opposite signs so that cancellation does not destroy it.
    pub fn to_f64(&self) -> f64 {
        let s7 = 7f64.sqrt();
        let (a, b) = (rat_f64(&self.a), rat_f64(&self.b));
        if a == 0.0 || b == 0.0 || (a > 0.0) == (b > 0.0) {
            a + b * s7
        } else {
            rat_f64(&self.norm()) / (a - b * s7)
        }
    }

    pub fn to_prec(&self, bits: usize) -> PrecReal {
        surd_eval(self, bits)
    }

    /// Exact comparison.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        surd_sign(&(self - other)).cmp(&0)
    }
}

/// Exact sign of a + b√7 using only rational arithmetic.
pub fn surd_sign(x: &QuadSurd) -> i32 {
    let sa = sgn(&x.a);
    let sb = sgn(&x.b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // Opposite signs: the larger of |a| and √7|b| wins.
    let a2 = &x.a * &x.a;
    let b2 = Rational::from_integer(7.into()) * &x.b * &x.b;
    match a2.cmp(&b2) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

fn sgn(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

/// Evaluates a + b√7 to the requested precision with small relative error.
pub fn surd_eval(x: &QuadSurd, precision_bits: usize) -> PrecReal {
    let bits = precision_bits.max(16);
    let work = bits + 32;
    let s7 = PrecReal::from_int(7, work).sqrt();
    let sa = sgn(&x.a);
    let sb = sgn(&x.b);
    let v = if sb == 0 {
        PrecReal::from_rational(&x.a, work)
    } else if sa == 0 || sa == sb {
        PrecReal::from_rational(&x.a, work) + PrecReal::from_rational(&x.b, work) * s7
    } else {
        let den = PrecReal::from_rational(&x.a, work) - PrecReal::from_rational(&x.b, work) * s7;
        PrecReal::from_rational(&x.norm(), work) / den
    };
    v.with_precision(bits)
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt7", self.b)
        } else {
            write!(f, "{} + {}*sqrt7", self.a, self.b)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a QuadSurd> for &'a QuadSurd {
            type Output = QuadSurd;
            fn $m(self, o: &'a QuadSurd) -> QuadSurd {
                let f: fn(&QuadSurd, &QuadSurd) -> QuadSurd = $body;
                f(self, o)
            }
        }
        impl $tr<QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $m(self, o: QuadSurd) -> QuadSurd {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $m(self, o: &'a QuadSurd) -> QuadSurd {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<QuadSurd> for &'a QuadSurd {
            type Output = QuadSurd;
            fn $m(self, o: QuadSurd) -> QuadSurd {
                self.$m(&o)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| QuadSurd::new(&x.a + &y.a, &x.b + &y.b));
forward_binop!(Sub, sub, |x, y| QuadSurd::new(&x.a - &y.a, &x.b - &y.b));
forward_binop!(Mul, mul, |x, y| {
    let seven = Rational::from_integer(7.into());
    QuadSurd::new(
        &x.a * &y.a + seven * &x.b * &y.b,
        &x.a * &y.b + &x.b * &y.a,
    )
});
forward_binop!(Div, div, |x, y| x * &y.inv());

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd::new(-self.a, -self.b)
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd::new(-&self.a, -&self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn sign_cases() {
        assert_eq!(surd_sign(&QuadSurd::from_ints(1, 1, 2, 1)), 1);
        assert_eq!(surd_sign(&QuadSurd::from_ints(-7, 1, 13, 1)), 1);
        assert_eq!(surd_sign(&QuadSurd::from_ints(8, 1, -3, 1)), 1);
        assert_eq!(surd_sign(&QuadSurd::from_ints(-8, 1, 3, 1)), -1);
        assert_eq!(surd_sign(&QuadSurd::zero()), 0);
    }

    #[test]
    fn inverse_roundtrip() {
        let x = QuadSurd::from_ints(3, 5, -2, 7);
        assert_eq!(&x * &x.inv(), QuadSurd::one());
    }

    #[test]
    fn eval_nu_c() {
        let nu = QuadSurd::from_ints(1, 1, 2, 1);
        let v = surd_eval(&nu, 64).to_f64();
        assert!((v - 6.291502622129181).abs() < 1e-14);
        let r = QuadSurd::new(rat(35, 252), rat(-5, 252));
        assert!((surd_eval(&r, 64).to_f64() - 0.0863938).abs() < 1e-7);
    }

    #[test]
    fn eval_cancelling_pair() {
        // 8 − 3√7 ≈ 0.0627542 loses digits if summed naively.
        let x = QuadSurd::from_ints(8, 1, -3, 1);
        let exact = 1.0 / (8.0 + 3.0 * 7f64.sqrt());
        assert!((x.to_f64() / exact - 1.0).abs() < 1e-15);
        assert!((surd_eval(&x, 128).to_f64() / exact - 1.0).abs() < 1e-15);
    }
}

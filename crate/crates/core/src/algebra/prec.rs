use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_base::{Abs, BitTest, Sign, SquareRoot, UnsignedAbs};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::BigInt;

use super::Rational;

type Big = FBig<HalfEven, 2>;

/// Binary floating-point value with recorded precision, rounding to nearest.
#[derive(Clone, Debug)]
pub struct PrecReal {
    v: Big,
    bits: usize,
}

fn to_ibig(n: &BigInt) -> IBig {
    let (sign, mag) = n.to_bytes_le();
    let mag = UBig::from_le_bytes(&mag);
    let s = if sign == num_bigint::Sign::Minus { Sign::Negative } else { Sign::Positive };
    IBig::from_parts(s, mag)
}

impl PrecReal {
    fn wrap(v: Big, bits: usize) -> Self {
        PrecReal { v, bits }
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_int(0, bits)
    }

    pub fn from_int(n: i64, bits: usize) -> Self {
        Self::wrap(Big::from(n).with_precision(bits).value(), bits)
    }

    pub fn from_rational(r: &Rational, bits: usize) -> Self {
        let n = Big::from(to_ibig(r.numer())).with_precision(bits).value();
        let d = Big::from(to_ibig(r.denom())).with_precision(bits).value();
        Self::wrap(n / d, bits)
    }

    pub fn from_f64(x: f64, bits: usize) -> Self {
        let v = Big::try_from(x).expect("finite f64").with_precision(bits).value();
        Self::wrap(v, bits)
    }

    pub fn precision_bits(&self) -> usize {
        self.bits
    }

    pub fn with_precision(&self, bits: usize) -> Self {
        Self::wrap(self.v.clone().with_precision(bits).value(), bits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(), self.bits)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.clone().abs(), self.bits)
    }

    pub fn is_zero(&self) -> bool {
        self.v.repr().is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.v.to_f64().value()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let d = self.v.to_decimal().value().with_precision(digits).value();
        format!("{d}")
    }

    /// log2 of |x|, as a quick magnitude probe; −∞ for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let r = self.v.repr();
        let sig = r.significand();
        let bits = sig.clone().unsigned_abs().bit_len() as f64;
        // significand * 2^exponent with significand in [2^(bits−1), 2^bits)
        let lead = Big::from_parts(sig.clone(), -(bits as isize) + 1).to_f64().value().abs();
        lead.log2() + bits - 1.0 + r.exponent() as f64
    }
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits as f64) * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal_string(digits.max(1)))
    }
}

macro_rules! prec_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for PrecReal {
            type Output = PrecReal;
            fn $m(self, o: PrecReal) -> PrecReal {
                let bits = self.bits.max(o.bits);
                PrecReal::wrap(self.v.$m(o.v), bits)
            }
        }
        impl<'a> $tr<&'a PrecReal> for &'a PrecReal {
            type Output = PrecReal;
            fn $m(self, o: &'a PrecReal) -> PrecReal {
                let bits = self.bits.max(o.bits);
                PrecReal::wrap((&self.v).$m(&o.v), bits)
            }
        }
    };
}

prec_binop!(Add, add);
prec_binop!(Sub, sub);
prec_binop!(Mul, mul);
prec_binop!(Div, div);

impl Neg for PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        PrecReal::wrap(-self.v, self.bits)
    }
}

impl PartialEq for PrecReal {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}

impl PartialOrd for PrecReal {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        self.v.partial_cmp(&o.v)
    }
}

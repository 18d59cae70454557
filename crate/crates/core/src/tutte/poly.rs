use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::{Field, Rational};

/// Polynomial in ν with integer coefficients, lowest degree first.
///
/// The recurrence only adds and multiplies counts, so [tⁿ]z_{p,q} always has
/// nonnegative integer coefficients; integers are stored instead of rationals.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct NuPoly {
    pub c: Vec<BigInt>,
}

impl NuPoly {
    pub fn zero() -> Self {
        NuPoly { c: Vec::new() }
    }

    pub fn constant(k: i64) -> Self {
        NuPoly { c: vec![BigInt::from(k)] }.trimmed()
    }

    /// The monomial ν^d.
    pub fn nu_pow(d: usize) -> Self {
        let mut c = vec![BigInt::zero(); d + 1];
        c[d] = BigInt::from(1);
        NuPoly { c }
    }

    pub fn from_coeffs(c: Vec<i64>) -> Self {
        NuPoly { c: c.into_iter().map(BigInt::from).collect() }.trimmed()
    }

    pub fn trimmed(mut self) -> Self {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn add_assign(&mut self, o: &NuPoly) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), BigInt::zero());
        }
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
        self.trim_in_place();
    }

    pub fn sub_assign(&mut self, o: &NuPoly) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), BigInt::zero());
        }
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a -= b;
        }
        self.trim_in_place();
    }

    fn trim_in_place(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn mul(&self, o: &NuPoly) -> NuPoly {
        let mut out = NuPoly::zero();
        out.add_mul(self, o);
        out
    }

    pub fn add_mul(&mut self, a: &NuPoly, b: &NuPoly) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let need = a.c.len() + b.c.len() - 1;
        if self.c.len() < need {
            self.c.resize(need, BigInt::zero());
        }
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                self.c[i + j] += x * y;
            }
        }
        self.trim_in_place();
    }

    /// Multiplication by ν.
    pub fn shift(&self) -> NuPoly {
        if self.is_zero() {
            return NuPoly::zero();
        }
        let mut c = Vec::with_capacity(self.c.len() + 1);
        c.push(BigInt::zero());
        c.extend(self.c.iter().cloned());
        NuPoly { c }
    }

    pub fn scale(&self, k: &BigInt) -> NuPoly {
        NuPoly { c: self.c.iter().map(|x| x * k).collect() }.trimmed()
    }

    pub fn eval<F: Field>(&self, nu: &F) -> F {
        let mut acc = F::zero();
        for x in self.c.iter().rev() {
            acc = acc.fmul(nu).fadd(&F::from_rational(&Rational::from_integer(x.clone())));
        }
        acc
    }

    pub fn all_nonnegative(&self) -> bool {
        self.c.iter().all(|x| !x.is_negative())
    }
}

impl fmt::Display for NuPoly {
    /// Renders as `c0+c1*v+c2*v^2`, skipping zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{x}")?,
                1 => write!(f, "{x}*v")?,
                _ => write!(f, "{x}*v^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn arithmetic() {
        let a = NuPoly::from_coeffs(vec![0, 1, 1]);
        let b = NuPoly::from_coeffs(vec![1, 1]);
        assert_eq!(a.mul(&b), NuPoly::from_coeffs(vec![0, 1, 2, 1]));
        assert_eq!(a.shift(), NuPoly::from_coeffs(vec![0, 0, 1, 1]));
        let mut c = a.clone();
        c.sub_assign(&a);
        assert!(c.is_zero());
        assert_eq!(a.eval(&rat(2, 1)), rat(6, 1));
        assert_eq!(format!("{a}"), "1*v+1*v^2");
    }
}

use crate::algebra::{constants_critical, rat, Field, PrecReal, QuadSurd, Series};
use crate::error::{Error, Result};

/// Polynomial with coefficients in Q(√7), lowest degree first.
pub type SurdPoly = Vec<QuadSurd>;

pub fn poly_mul(a: &[QuadSurd], b: &[QuadSurd]) -> SurdPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![QuadSurd::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

pub fn poly_add(a: &[QuadSurd], b: &[QuadSurd]) -> SurdPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

pub fn poly_scale(a: &[QuadSurd], k: &QuadSurd) -> SurdPoly {
    a.iter().map(|x| x * k).collect()
}

pub fn poly_eval<F: Field>(p: &[QuadSurd], x: &F) -> F {
    p.iter().rev().fold(F::zero(), |acc, c| acc.fmul(x).fadd(&F::from_surd(c)))
}

fn poly_eval_prec(p: &[QuadSurd], x: &PrecReal) -> PrecReal {
    let bits = x.precision_bits();
    p.iter().rev().fold(PrecReal::zero(bits), |acc, c| &(&acc * x) + &c.to_prec(bits))
}

/// Integer-coefficient polynomial as a [`SurdPoly`].
pub fn ipoly(c: &[i64]) -> SurdPoly {
    c.iter().map(|&x| QuadSurd::from_int(x)).collect()
}

/// Ratio of two polynomials over Q(√7).
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction1V {
    pub num: SurdPoly,
    pub den: SurdPoly,
}

impl RationalFunction1V {
    /// Builds num/den, scaled so that the lowest nonzero denominator
    /// coefficient is 1.
    pub fn new(num: SurdPoly, den: SurdPoly) -> Result<Self> {
        let Some(lead) = den.iter().find(|c| !c.is_zero()) else {
            return Err(Error::Invalid("zero denominator".into()));
        };
        let k = lead.inv();
        Ok(RationalFunction1V { num: poly_scale(&num, &k), den: poly_scale(&den, &k) })
    }

    pub fn polynomial(num: SurdPoly) -> Self {
        RationalFunction1V { num, den: vec![QuadSurd::one()] }
    }

    pub fn eval_surd(&self, x: &QuadSurd) -> Result<QuadSurd> {
        let d = poly_eval(&self.den, x);
        if d.is_zero() {
            return Err(Error::Invalid(format!("pole at {x}")));
        }
        Ok(poly_eval(&self.num, x) / d)
    }

    pub fn eval<F: Field>(&self, x: &F) -> Result<F> {
        let d = poly_eval(&self.den, x);
        if d.is_zero() {
            return Err(Error::Invalid(format!("pole at {x:?}")));
        }
        Ok(poly_eval(&self.num, x).fdiv(&d))
    }

    pub fn eval_prec(&self, x: &PrecReal) -> Result<PrecReal> {
        let d = poly_eval_prec(&self.den, x);
        if d.is_zero() {
            return Err(Error::Invalid(format!("pole at {x}")));
        }
        Ok(&poly_eval_prec(&self.num, x) / &d)
    }

    /// The series f(s(w)); the denominator must not vanish at s(0).
    pub fn compose<F: Field>(&self, s: &Series<F>) -> Result<Series<F>> {
        let num = s.compose_poly(&self.num.iter().map(F::from_surd).collect::<Vec<_>>());
        let den = s.compose_poly(&self.den.iter().map(F::from_surd).collect::<Vec<_>>());
        if den.c[0].is_zero() {
            return Err(Error::Invalid("denominator vanishes at the expansion point".into()));
        }
        Ok(num.div(&den))
    }

    /// Taylor coefficients of f(x0 + h) in h.
    pub fn taylor_at<F: Field>(&self, x0: &F, order: usize) -> Result<Series<F>> {
        let h = Series::from_coeffs(vec![x0.clone(), F::one()], order);
        self.compose(&h)
    }
}

/// The four parametrized functions of the critical boundary generating
/// functions, each stored up to a fixed normalizing factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// û(H)/u_c
    UHat,
    /// Ẑ₀(H) (no factor)
    Z0Hat,
    /// u_c·Ẑ₁(H)
    Z1Hat,
    /// Â(H)/Â(0), with Â(0) = (3/2)^{7/3}/10
    AHat,
}

impl Which {
    pub fn factor(self) -> &'static str {
        match self {
            Which::UHat => "u_c",
            Which::Z0Hat => "1",
            Which::Z1Hat => "1/u_c",
            Which::AHat => "(3/2)^(7/3)/10",
        }
    }
}

/// 10 − 12H + 6H² − H³
fn q_poly() -> SurdPoly {
    ipoly(&[10, -12, 6, -1])
}

pub fn param(which: Which) -> RationalFunction1V {
    let third = QuadSurd::from_rational(rat(1, 3));
    let tenth = QuadSurd::from_rational(rat(1, 10));
    match which {
        Which::UHat => RationalFunction1V::polynomial(poly_scale(&poly_mul(&ipoly(&[0, 1]), &q_poly()), &third)),
        Which::Z0Hat => {
            let p = vec![QuadSurd::one(), QuadSurd::from_ints(-1, 1, 1, 1), QuadSurd::from_int(3), QuadSurd::from_int(-1)];
            RationalFunction1V::polynomial(poly_scale(&poly_mul(&p, &q_poly()), &tenth))
        }
        Which::Z1Hat => {
            // (3/10)·[(√7 − 1 + H)·Q − 3(4 − 3H + H²)] / Q
            let lin = vec![QuadSurd::from_ints(-1, 1, 1, 1), QuadSurd::one()];
            let num = poly_add(&poly_mul(&lin, &q_poly()), &ipoly(&[-12, 9, -3]));
            RationalFunction1V::new(poly_scale(&num, &QuadSurd::from_rational(rat(3, 10))), q_poly())
                .expect("nonzero denominator")
        }
        Which::AHat => {
            let d = ipoly(&[3, -3, 1]);
            RationalFunction1V::new(ipoly(&[9, -8, 3]), poly_mul(&d, &d)).expect("nonzero denominator")
        }
    }
}

/// Normalized value of a parametrization at an exact H.
pub fn eval_param(which: Which, h: &QuadSurd) -> Result<QuadSurd> {
    param(which).eval_surd(h)
}

/// Cube root by Newton iteration.
fn cbrt(x: &PrecReal) -> PrecReal {
    let bits = x.precision_bits();
    let mut y = PrecReal::from_f64(x.to_f64().cbrt(), bits);
    let three = PrecReal::from_int(3, bits);
    let two = PrecReal::from_int(2, bits);
    for _ in 0..(bits.ilog2() + 4) {
        let y2 = &y * &y;
        y = &(&(&two * &y) + &(x / &y2)) / &three;
    }
    y
}

/// Actual value of a parametrization at H, normalizing factor included.
pub fn eval_param_prec(which: Which, h: &PrecReal) -> Result<PrecReal> {
    let bits = h.precision_bits();
    let v = param(which).eval_prec(h)?;
    let cc = constants_critical();
    Ok(match which {
        Which::UHat => &v * &cc.u_c(bits),
        Which::Z0Hat => v,
        Which::Z1Hat => &v / &cc.u_c(bits),
        Which::AHat => {
            let c = PrecReal::from_rational(&rat(2187, 128), bits + 16);
            let f = &cbrt(&c).with_precision(bits) / &PrecReal::from_int(10, bits);
            &v * &f
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_hat_at_critical_point() {
        assert_eq!(eval_param(Which::UHat, &QuadSurd::one()).unwrap(), QuadSurd::one());
        assert_eq!(eval_param(Which::UHat, &QuadSurd::zero()).unwrap(), QuadSurd::zero());
        let h = PrecReal::from_int(1, 128);
        let u = eval_param_prec(Which::UHat, &h).unwrap();
        assert!((u.to_f64() - 0.15272961).abs() < 1e-8);
    }

    #[test]
    fn a_hat_at_origin() {
        assert_eq!(eval_param(Which::AHat, &QuadSurd::zero()).unwrap(), QuadSurd::one());
        let a0 = eval_param_prec(Which::AHat, &PrecReal::zero(128)).unwrap();
        assert!((a0.to_f64() - 1.5f64.powf(7.0 / 3.0) / 10.0).abs() < 1e-15);
    }

    #[test]
    fn z0_hat_at_one() {
        assert_eq!(eval_param(Which::Z0Hat, &QuadSurd::one()).unwrap(), QuadSurd::from_ints(3, 5, 3, 10));
    }

    #[test]
    fn z1_hat_has_poles_at_denominator_roots() {
        // 10 − 12H + 6H² − H³ has a real root near 1.4
        let f = param(Which::Z1Hat);
        assert!(f.eval(&0.5f64).is_ok());
        assert_eq!(f.den[0], QuadSurd::one());
    }

    #[test]
    fn theorem_form_of_u_hat() {
        // 1 − (2/3)(1−H)³ − (1/3)(1−H)⁴ as a polynomial in H
        let omh = ipoly(&[1, -1]);
        let c3 = poly_mul(&poly_mul(&omh, &omh), &omh);
        let c4 = poly_mul(&c3, &omh);
        let alt = poly_add(
            &poly_add(&ipoly(&[1]), &poly_scale(&c3, &QuadSurd::from_rational(rat(-2, 3)))),
            &poly_scale(&c4, &QuadSurd::from_rational(rat(-1, 3))),
        );
        assert_eq!(alt, param(Which::UHat).num);
    }
}

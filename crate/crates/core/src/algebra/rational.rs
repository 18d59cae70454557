use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Reduced arbitrary-precision rational; `num_rational` keeps it canonical.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled quotient for huge numerators/denominators.
        let (n, d) = (r.numer(), r.denom());
        let shift = n.bits() as i64 - d.bits() as i64;
        let (n2, d2) = if shift > 0 {
            (n.clone(), d.clone() << (shift as usize))
        } else {
            (n.clone() << ((-shift) as usize), d.clone())
        };
        let q = Rational::new(n2, d2).to_f64().unwrap_or(f64::NAN);
        q * 2f64.powi(shift as i32)
    })
}

/// Parses `"a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

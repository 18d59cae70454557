use super::param::{param, Which};
use super::rp13::rp13_at;
use crate::algebra::{constants_critical, rat, PrecReal, QuadSurd};
use crate::error::{Error, Result};

fn q(n: i64) -> QuadSurd {
    QuadSurd::from_int(n)
}

/// Exact value of L⁴ − 2C₂(J)L² − C₀(J) on the critical curve at parameter H,
/// with z₁, z₃ taken from their parametrization at S = 3.
pub fn appendix_residual_exact(h: &QuadSurd) -> Result<QuadSurd> {
    let cc = constants_critical();
    let nu = &cc.nu_c;
    let (t2, t3z1, t9z3) = rp13_at(nu, &q(3))?;
    if t2 != cc.t_c_squared {
        return Err(Error::Check(format!("S = 3 gives t² = {t2}, not t_c²")));
    }
    let uh = param(Which::UHat).eval_surd(h)?;
    if uh.is_zero() {
        return Err(Error::Invalid(format!("û vanishes at H = {h}")));
    }
    let z0 = param(Which::Z0Hat).eval_surd(h)?;
    let one = QuadSurd::one();
    let (nm1, np1) = (nu - &one, nu + &one);
    let nu2m1 = &(nu * nu) - &one;

    let tyu = &(&cc.t_over_u * &z0) / &uh; // t·y/u
    let tu = &cc.t_times_u * &uh; // t·u
    let j = &(&nm1 * &(&tu + &(&tyu * &tyu))) - &tyu;
    let l = &(&q(2) * &tyu) + &(&np1 * &j);

    let t4 = &t2 * &t2;
    let t5z3 = &t9z3 / &t4;
    let t4z1sq = &(&t3z1 * &t3z1) / &t2;
    let t5z1cu = &(&(&t3z1 * &t3z1) * &t3z1) / &t4;
    let w = &(&(&(&nu2m1 * &nu2m1)
        * &(&(&(&q(2) * &t5z1cu) - &(&(&q(3) / &np1) * &t4z1sq))
            - &(&QuadSurd::from_rational(rat(3, 4)) * &t4)))
        - &(&(&nu2m1 * &nu2m1) * &t5z3))
        + &(&(&(&(nu - &q(3)) * nu) * &t3z1) + &t2);

    let j2 = &j * &j;
    let c2 = &(&(&(&(&np1 * &np1) * &j2) + &(&(&q(2) * &(nu + &q(3))) * &(&j / &nm1)))
        - &(&(&q(2) * &nu2m1) * &t2))
        + &(&q(2) / &(&nm1 * &nm1));
    let inner = &(&(&np1 * &j2) - &(&(&q(2) * &nm1) * &t2));
    let c0 = &(&(&(&q(16) * &w) + &(&(&(&(&q(16) * &np1) * nu) * &t2) * &j)) - &(&q(4) * &j2))
        - &(&(&np1 * &np1)
            * &(&(&(inner * inner) + &(&q(4) * &(&j2 * &j))) + &(&(&(&q(16) * &nm1) * &t3z1) * &j)));
    let l2 = &l * &l;
    Ok(&(&(&l2 * &l2) - &(&(&q(2) * &c2) * &l2)) - &c0)
}

/// max over the points of |L⁴ − 2C₂(J)L² − C₀(J)|, evaluated at the given
/// precision (the residual itself is computed exactly).
pub fn appendix_residual(points: &[QuadSurd], precision_bits: usize) -> Result<PrecReal> {
    let mut worst = PrecReal::zero(precision_bits);
    for h in points {
        let r = appendix_residual_exact(h)?.to_prec(precision_bits).abs();
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}

use super::param::{param, Which};
use crate::algebra::{constants_critical, rat, QuadSurd, Rational};
use crate::error::{Error, Result};

/// Boundary generating functions and their derivatives at u = u_c, in
/// normalized forms that lie in Q(√7).
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValues {
    /// Z₀(u_c) = ζ(1)
    pub z0_at_uc: QuadSurd,
    /// u_c·Z₁(u_c) = ξ(1)
    pub z1_at_uc: QuadSurd,
    /// u_c·Z₀'(u_c) = ζ'(1)
    pub dz0_at_uc: QuadSurd,
    /// u_c²·Z₁'(u_c) = ξ'(1)
    pub dz1_at_uc: QuadSurd,
    /// A(u_c)/a₀
    pub a_at_uc_over_a0: QuadSurd,
    /// dÂ/dH at H = 1 divided by (3/2)^{7/3}
    pub b_ratio: Rational,
    /// dα/dH at H = 1
    pub alpha_h_slope: Rational,
}

/// Lowest nonvanishing order of a Taylor expansion (ignoring the constant).
fn order_and_lead(c: &[QuadSurd]) -> Option<(usize, QuadSurd)> {
    c.iter().enumerate().skip(1).find(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone()))
}

/// d f(u)/d(u/u_c) at u = u_c for f parametrized by H, as the ratio of
/// leading Taylor coefficients at H = 1.
fn matched_derivative(which: Which, u_lead: &(usize, QuadSurd)) -> Result<QuadSurd> {
    let t = param(which).taylor_at(&QuadSurd::one(), 6)?;
    let (k, c) = order_and_lead(&t.c).ok_or_else(|| Error::Check(format!("{which:?} constant near H = 1")))?;
    if k != u_lead.0 {
        return Err(Error::Check(format!(
            "{which:?} vanishes to order {k} at H = 1 but û to order {}",
            u_lead.0
        )));
    }
    Ok(c / &u_lead.1)
}

pub fn values_at_uc() -> Result<CriticalValues> {
    let one = QuadSurd::one();
    let ut = param(Which::UHat).taylor_at(&one, 6)?;
    let u_lead = order_and_lead(&ut.c).ok_or_else(|| Error::Check("û constant near H = 1".into()))?;
    let at = param(Which::AHat).taylor_at(&one, 2)?;
    let slope = at.c[1].clone();
    if !slope.is_rational() {
        return Err(Error::Check("α'(1) irrational".into()));
    }
    Ok(CriticalValues {
        z0_at_uc: param(Which::Z0Hat).eval_surd(&one)?,
        z1_at_uc: param(Which::Z1Hat).eval_surd(&one)?,
        dz0_at_uc: matched_derivative(Which::Z0Hat, &u_lead)?,
        dz1_at_uc: matched_derivative(Which::Z1Hat, &u_lead)?,
        a_at_uc_over_a0: at.c[0].clone(),
        b_ratio: &slope.a / rat(10, 1),
        alpha_h_slope: slope.a,
    })
}

/// Order to which û − u_c vanishes at H = 1 together with the first three
/// derivative values.
pub fn u_hat_vanishing_order() -> Result<(usize, [QuadSurd; 3])> {
    let ut = param(Which::UHat).taylor_at(&QuadSurd::one(), 5)?;
    let (k, _) = order_and_lead(&ut.c).ok_or_else(|| Error::Check("û constant".into()))?;
    // Taylor coefficients times k! give derivatives
    Ok((k, [ut.c[1].clone(), &ut.c[2] * &QuadSurd::from_int(2), &ut.c[3] * &QuadSurd::from_int(6)]))
}

/// Exact drift and tail constants of the full-plane walk.
#[derive(Clone, Debug, PartialEq)]
pub struct DriftTails {
    /// Mean displacement of the Q-perimeter (the printed formula for the mean).
    pub mu: QuadSurd,
    /// Mean displacement of the P-perimeter, assembled from the event table.
    pub mu_other: QuadSurd,
    /// E[X₁ + Y₁]
    pub mu_sum: QuadSurd,
    /// Ratio of the −k tail prefactors, heavy over light.
    pub cx_over_cy: QuadSurd,
    /// lim_m c_m
    pub c_infinity: QuadSurd,
    /// (ν_c + 1)·t_c·(Z₀(u_c)/u_c + Z₁(u_c)), which must equal 1.
    pub normalization: QuadSurd,
}

/// Computes the drift and tail constants and checks them against their
/// closed forms exactly.
pub fn drift_and_tails(v: &CriticalValues, alpha1: &Rational) -> Result<DriftTails> {
    let cc = constants_critical();
    let nu = &cc.nu_c;
    let th = &cc.t_over_u;
    let one = QuadSurd::one();
    let (z0, xi, dz0, dxi) = (&v.z0_at_uc, &v.z1_at_uc, &v.dz0_at_uc, &v.dz1_at_uc);

    let normalization = &(nu + &one) * &(th * &(z0 + xi));
    let mu = th * &(&(&(&(nu - &one) * z0) - xi) - &(&(nu * dz0) + dxi));
    let mu_other = th * &(&(&(xi + &(z0 * &QuadSurd::from_int(2))) - dz0) - &(nu * dxi));
    let mu_sum = &(nu + &one) * &(th * &(&(z0 - dz0) - dxi));
    let a1 = QuadSurd::from_rational(alpha1.clone());
    let cx_over_cy = &(nu + &a1) / &(&one + &(nu * &a1));
    let slope = QuadSurd::from_rational(v.alpha_h_slope.clone());
    let c_infinity = &(&(&(&QuadSurd::from_rational(rat(4, 3)) * th) * &(nu + &one)) * &(&one + &a1))
        * &(&(&(&v.a_at_uc_over_a0 - &one) * &QuadSurd::from_rational(rat(9, 40))) / &slope);

    let out = DriftTails { mu, mu_other, mu_sum, cx_over_cy, c_infinity, normalization };
    let checks = [
        ("normalization", &out.normalization, one.clone()),
        ("mu", &out.mu, cc.mu_surd()),
        ("mu from the table", &out.mu_other, cc.mu_surd()),
        ("mu_sum", &out.mu_sum, &cc.mu_surd() * &QuadSurd::from_int(2)),
        ("cx/cy", &out.cx_over_cy, &QuadSurd::from_ints(2, 1, 3, 1) / &QuadSurd::from_ints(2, 1, 1, 1)),
        ("c_infinity", &out.c_infinity, &cc.mu_surd() * &QuadSurd::from_rational(rat(4, 3))),
    ];
    for (name, got, want) in checks {
        if *got != want {
            return Err(Error::Check(format!("{name}: got {got}, expected {want}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_match_closed_forms() {
        let v = values_at_uc().unwrap();
        assert_eq!(v.z0_at_uc, QuadSurd::from_ints(3, 5, 3, 10));
        assert_eq!(v.z1_at_uc, QuadSurd::from_ints(-3, 5, 3, 10));
        assert!((v.z0_at_uc.to_f64() - 1.3937254).abs() < 1e-7);
        assert_eq!(v.b_ratio, rat(3, 5));
        assert_eq!(v.a_at_uc_over_a0, QuadSurd::from_int(4));
    }

    #[test]
    fn cube_order_singularity() {
        let (k, d) = u_hat_vanishing_order().unwrap();
        assert_eq!(k, 3);
        assert!(d[0].is_zero() && d[1].is_zero() && !d[2].is_zero());
    }

    #[test]
    fn drift_identities_hold() {
        let v = values_at_uc().unwrap();
        let d = drift_and_tails(&v, &rat(1, 3)).unwrap();
        assert!((d.mu.to_f64() - 0.0944911).abs() < 1e-7);
        assert!(d.cx_over_cy.cmp_value(&QuadSurd::one()).is_gt());
        assert!((d.cx_over_cy.to_f64() - 2.139).abs() < 1e-3);
    }
}

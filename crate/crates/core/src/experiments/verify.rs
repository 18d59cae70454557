use serde::{Deserialize, Serialize};

use crate::algebra::{constants_critical, rat, Field, PrecReal, QuadSurd, Rational};
use crate::critical::{appendix_residual, boundary_series, drift_and_tails, rp13_series, values_at_uc};
use crate::error::Result;
use crate::laws::halfplane_masses_exact;
use crate::tutte::{build_evaluated_table, build_exact_table, verify_functional_equations, Coef};

/// One identity of the verification suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> IdentityCheck {
    IdentityCheck { name: name.into(), pass, detail: detail.into() }
}

fn failed(name: &str, e: impl std::fmt::Display) -> IdentityCheck {
    check(name, false, format!("error: {e}"))
}

/// Options of [`verify_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub precision_bits: usize,
    /// t-order of the functional-equation check.
    pub funceq_order: usize,
    /// Largest p of the exact half-plane normalization check.
    pub halfplane_p: usize,
    /// Number of nonzero orders compared between the two series engines.
    pub series_orders: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { precision_bits: 256, funceq_order: 15, halfplane_p: 50, series_orders: 10 }
    }
}

/// The closed-form constants, all compared exactly in Q(√7).
pub fn verify_constants() -> Vec<IdentityCheck> {
    let cc = constants_critical();
    let v = match values_at_uc() {
        Ok(v) => v,
        Err(e) => return vec![failed("critical values", e)],
    };
    let alpha1 = match boundary_series(2) {
        Ok(b) => b.alpha[1].clone(),
        Err(e) => return vec![failed("boundary series", e)],
    };
    let mut out = vec![check("a1 u_c / a0 = 1/3", alpha1 == rat(1, 3), alpha1.to_string())];
    out.push(check("b ratio = 3/5", v.b_ratio == rat(3, 5), v.b_ratio.to_string()));
    match drift_and_tails(&v, &alpha1) {
        Ok(d) => {
            let one = QuadSurd::one();
            let sq = |x: &QuadSurd| x * x;
            out.push(check("normalization = 1", d.normalization == one, d.normalization.to_string()));
            out.push(check(
                "mu^2 = 1/112",
                sq(&d.mu) == QuadSurd::from_rational(rat(1, 112)) && d.mu.is_positive() && d.mu == d.mu_other,
                d.mu.to_string(),
            ));
            out.push(check(
                "E[X1 + Y1]^2 = 1/28",
                sq(&d.mu_sum) == QuadSurd::from_rational(rat(1, 28)) && d.mu_sum.is_positive(),
                d.mu_sum.to_string(),
            ));
            let c43 = &d.mu * &QuadSurd::from_rational(rat(4, 3));
            out.push(check(
                "c_inf = 4 mu / 3",
                d.c_infinity == c43 && sq(&d.c_infinity) == QuadSurd::from_rational(cc.c_infty_squared.clone()),
                d.c_infinity.to_string(),
            ));
            let want = &QuadSurd::from_ints(2, 1, 3, 1) / &QuadSurd::from_ints(2, 1, 1, 1);
            out.push(check("c_x / c_y = (2 + 3 sqrt7)/(2 + sqrt7)", d.cx_over_cy == want, d.cx_over_cy.to_string()));
        }
        Err(e) => out.push(failed("drift and tail constants", e)),
    }
    out
}

/// Exact equations on the recurrence table up to the given t-order.
pub fn verify_funceq(order: usize) -> IdentityCheck {
    let name = format!("functional equations to order {order}");
    match build_exact_table(order, order + 2).and_then(|t| verify_functional_equations(&t, order)) {
        Ok(r) => check(&name, r.all_pass(), r.to_string()),
        Err(e) => failed(&name, e),
    }
}

fn compare_engines<F: Field + Coef<Nu = F>>(nu: F, orders: usize) -> Result<(bool, String)> {
    // z₁ and z₃ live on odd orders only
    let n_top = 2 * orders - 1;
    let r = rp13_series(&nu, n_top)?;
    let t = build_evaluated_table(n_top, 3, nu)?;
    let (mut nz1, mut nz3) = (0, 0);
    for n in 0..=n_top {
        let (a, b) = (r.z1_coeff(n), t.get(1, 0, n));
        let (c, d) = (r.z3_coeff(n), t.get(3, 0, n));
        if a != b || c != d {
            return Ok((false, format!("mismatch at order {n}")));
        }
        nz1 += usize::from(!Field::is_zero(&a));
        nz3 += usize::from(!Field::is_zero(&c));
    }
    Ok((nz1 >= orders && nz3 >= orders, format!("{nz1} and {nz3} nonzero orders agree")))
}

/// Series of z₁ and z₃ from their rational parametrization against the
/// recurrence, at ν = 2 and at ν_c.
pub fn verify_series_engines(orders: usize) -> Vec<IdentityCheck> {
    let two = compare_engines(Rational::from_int(2), orders);
    let crit = compare_engines(constants_critical().nu_c, orders);
    [("series engines agree at nu = 2", two), ("series engines agree at nu_c", crit)]
        .into_iter()
        .map(|(name, r)| match r {
            Ok((pass, detail)) => check(name, pass, detail),
            Err(e) => failed(name, e),
        })
        .collect()
}

/// Total mass of the half-plane laws, summed exactly.
pub fn verify_halfplane_normalization(p_max: usize, bits: usize) -> IdentityCheck {
    let name = format!("half-plane laws sum to 1 for p <= {p_max}");
    match halfplane_masses_exact(p_max) {
        Ok(masses) => {
            let one = QuadSurd::one();
            let mut worst = PrecReal::from_f64(0.0, bits);
            for m in &masses {
                let total = m.iter().fold(QuadSurd::zero(), |acc, x| &acc + x);
                let d = (&total - &one).to_prec(bits).abs();
                if d > worst {
                    worst = d;
                }
            }
            let pass = worst < PrecReal::from_f64(1e-12, bits);
            check(&name, pass, format!("max defect {}", worst.to_f64()))
        }
        Err(e) => failed(&name, e),
    }
}

/// The quartic residual at H = k/10, k = 1..=10.
pub fn verify_appendix(bits: usize) -> IdentityCheck {
    let pts: Vec<QuadSurd> = (1..=10).map(|k| QuadSurd::from_rational(rat(k, 10))).collect();
    let name = "quartic residual below 1e-20 at 10 points";
    match appendix_residual(&pts, bits) {
        Ok(r) => check(name, r < PrecReal::from_f64(1e-20, bits), format!("max residual {}", r.to_f64())),
        Err(e) => failed(name, e),
    }
}

/// Every exact identity in turn.
pub fn verify_suite(opts: &VerifyOptions) -> Vec<IdentityCheck> {
    let mut out = verify_constants();
    out.push(verify_funceq(opts.funceq_order));
    out.extend(verify_series_engines(opts.series_orders));
    out.push(verify_halfplane_normalization(opts.halfplane_p, opts.precision_bits.max(128)));
    out.push(verify_appendix(opts.precision_bits));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_hold() {
        let c = verify_constants();
        assert_eq!(c.len(), 7);
        assert!(c.iter().all(|c| c.pass), "{c:?}");
    }

    #[test]
    fn quick_suite() {
        let opts = VerifyOptions { funceq_order: 6, halfplane_p: 10, series_orders: 10, precision_bits: 256 };
        let c = verify_suite(&opts);
        assert!(c.iter().all(|c| c.pass), "{c:?}");
    }
}

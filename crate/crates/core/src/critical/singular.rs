use super::param::{param, Which};
use crate::algebra::{constants_critical, rat, Field, Rational, Series};
use crate::error::{Error, Result};
use statrs::function::gamma::gamma;

/// ε(σ) with σ = ε(1 + ε/2)^{1/3}, i.e. 1 − H as a series in
/// σ = ((3/2)(1 − w))^{1/3}.
pub fn epsilon_of_sigma<F: Field>(n: usize) -> Series<F> {
    // (1 + ε/2)^{1/3} as a polynomial in ε
    let mut g = vec![F::one()];
    for k in 1..=n {
        let f = F::from_rational(&((rat(1, 3) - Rational::from_int(k as i64 - 1)) / Rational::from_int(2 * k as i64)));
        g.push(g[k - 1].fmul(&f));
    }
    let mut sigma = Series::zero(n);
    if n >= 1 {
        sigma.c[1] = F::one();
    }
    let mut eps = sigma.clone();
    // each pass fixes one more coefficient of ε = σ / g(ε)
    for _ in 0..n {
        eps = sigma.mul(&eps.compose_poly(&g).inv());
    }
    eps
}

/// Expansions at w = 1 of the boundary series and the derived sums, as
/// series in σ = ((3/2)(1 − w))^{1/3}.
#[derive(Clone, Debug)]
pub struct SingularExpansions<F> {
    pub zeta: Vec<F>,
    pub xi: Vec<F>,
    pub alpha: Vec<F>,
    /// Σ_p R_p w^p with R_p = Σ_{q≥1} w_{p,q}
    pub row_tail: Vec<F>,
    /// (ζ(w) − 1)(α(w) − 1)
    pub conv_rp: Vec<F>,
    /// Ξ(w)α(w)
    pub conv_rm: Vec<F>,
}

/// Order in σ of the common zero of the numerator and denominator of the
/// row-tail series at w = 1.
pub const ROW_TAIL_ZERO: usize = 3;

/// Numerator and denominator of the row-tail series in σ.
fn row_tail_parts<F: Field>(zeta: &Series<F>, xi: &Series<F>, n: usize) -> (Series<F>, Series<F>) {
    let cc = constants_critical();
    let (nu, th, u2) = (F::from_surd(&cc.nu_c), F::from_surd(&cc.t_over_u), F::from_surd(&cc.u_c_squared()));
    let one = F::one();
    let mut w = Series::constant(one.clone(), n);
    if n >= 3 {
        w.c[3] = F::from_rational(&rat(-2, 3));
    }
    let z1 = zeta.c[0].clone();
    let k = nu.fmul(&nu).fsub(&one);
    let kth = k.fmul(&th);
    let num = zeta
        .add_const(&z1.fneg())
        .add(&w.mul(&xi.scale(&kth.fmul(&z1).fneg()).add_const(&k.fmul(&u2))));
    let den = w.scale(&nu).add_const(&one.fneg()).sub(&w.mul(&xi.add_const(&z1)).scale(&kth));
    (num, den)
}

/// Expansions to order n in σ (the row tail to order n − 3).
pub fn singular_expansions<F: Field>(n: usize) -> Result<SingularExpansions<F>> {
    if n <= ROW_TAIL_ZERO {
        return Err(Error::Invalid(format!("order {n} too small")));
    }
    let eps: Series<F> = epsilon_of_sigma(n);
    let h = eps.scale(&F::from_int(-1)).add_const(&F::one());
    let zeta = param(Which::Z0Hat).compose(&h)?;
    let xi = param(Which::Z1Hat).compose(&h)?;
    let alpha = param(Which::AHat).compose(&h)?;
    let (num, den) = row_tail_parts(&zeta, &xi, n);
    let m = n - ROW_TAIL_ZERO;
    let lift = |s: &Series<F>| Series { c: s.c[ROW_TAIL_ZERO..].to_vec() }.truncate(m);
    let row_tail = lift(&num).div(&lift(&den));
    let one = F::one();
    let conv_rp = zeta.add_const(&one.fneg()).mul(&alpha.add_const(&one.fneg()));
    let conv_rm = xi.mul(&alpha);
    Ok(SingularExpansions {
        zeta: zeta.c,
        xi: xi.c,
        alpha: alpha.c,
        row_tail: row_tail.c,
        conv_rp: conv_rp.c,
        conv_rm: conv_rm.c,
    })
}

/// Large-n coefficient asymptotics [wⁿ]F ≈ Σ_j c_j κ^j [wⁿ](1 − w)^{j/3}
/// for F = Σ c_j σ^j, κ = (3/2)^{1/3}. Integer powers of (1 − w) are
/// polynomials and drop out for n above the expansion order.
#[derive(Clone, Debug)]
pub struct CoeffAsymptotics {
    /// (β, weight) pairs with β = j/3 non-integral
    terms: Vec<(f64, f64)>,
    /// weight / Γ(−β) for each term, used by [`CoeffAsymptotics::value_at`]
    scaled: Vec<f64>,
}

/// ln Γ(n + a) − ln Γ(n + b) from the Stirling series, for n large against |a|, |b|.
fn ln_gamma_ratio(n: f64, a: f64, b: f64) -> f64 {
    let corr = |x: f64| {
        let r = 1.0 / x;
        let r2 = r * r;
        r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 / 1260.0))
    };
    (a - b) * n.ln() + (n + a - 0.5) * (a / n).ln_1p() - (n + b - 0.5) * (b / n).ln_1p() - (a - b) + corr(n + a)
        - corr(n + b)
}

impl CoeffAsymptotics {
    pub fn new<F: Field>(sigma_coeffs: &[F]) -> Self {
        let kappa = 1.5f64.cbrt();
        let terms = sigma_coeffs
            .iter()
            .enumerate()
            .filter(|(j, c)| j % 3 != 0 && !c.is_zero())
            .map(|(j, c)| (j as f64 / 3.0, c.to_f64() * kappa.powi(j as i32)))
            .collect::<Vec<(f64, f64)>>();
        let scaled = terms.iter().map(|&(beta, c)| c / gamma(-beta)).collect();
        CoeffAsymptotics { terms, scaled }
    }

    /// Coefficient at a single large index, in O(terms) work.
    pub fn value_at(&self, n: usize) -> f64 {
        let x = n as f64;
        self.terms.iter().zip(&self.scaled).map(|(&(beta, _), s)| s * ln_gamma_ratio(x, -beta, 1.0).exp()).sum()
    }

    /// Coefficients for indices n0..n1.
    pub fn range(&self, n0: usize, n1: usize) -> Vec<f64> {
        let mut st = self.state_at(n0);
        let mut out = Vec::with_capacity(n1.saturating_sub(n0));
        for _ in n0..n1 {
            out.push(self.value(&st));
            self.advance(&mut st);
        }
        out
    }

    /// Binomial coefficients at index n, from their exact product form.
    pub fn state_at(&self, n: usize) -> AsymptoticState {
        let mut b: Vec<f64> = vec![1.0; self.terms.len()];
        for m in 1..=n {
            for (bi, (beta, _)) in b.iter_mut().zip(&self.terms) {
                *bi *= (m as f64 - 1.0 - beta) / m as f64;
            }
        }
        AsymptoticState { n, b }
    }

    pub fn value(&self, st: &AsymptoticState) -> f64 {
        st.b.iter().zip(&self.terms).map(|(bi, (_, c))| bi * c).sum()
    }

    pub fn advance(&self, st: &mut AsymptoticState) {
        st.n += 1;
        let n = st.n as f64;
        for (bi, (beta, _)) in st.b.iter_mut().zip(&self.terms) {
            *bi *= (n - 1.0 - beta) / n;
        }
    }
}

/// Binomial coefficients [wⁿ](1 − w)^β for each term at the current n.
#[derive(Clone, Debug)]
pub struct AsymptoticState {
    pub n: usize,
    b: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuadSurd;
    use crate::critical::{boundary_series, boundary_series_f64, row_tails, values_at_uc};

    #[test]
    fn epsilon_inverts_the_singular_map() {
        let e: Series<Rational> = epsilon_of_sigma(8);
        assert_eq!(e.c[1], rat(1, 1));
        assert_eq!(e.c[2], rat(-1, 6));
        // σ = ε(1+ε/2)^{1/3}: cube both sides, σ³ = ε³(1 + ε/2)
        let e3 = e.mul(&e).mul(&e);
        let rhs = e3.add(&e3.mul(&e).scale(&rat(1, 2)));
        let mut s3 = Series::zero(8);
        s3.c[3] = rat(1, 1);
        assert_eq!(rhs, s3);
    }

    #[test]
    fn leading_singular_orders() {
        let s = singular_expansions::<QuadSurd>(12).unwrap();
        // α has a (1 − w)^{1/3} term; ζ and ξ start at (1 − w)^{4/3}
        assert!(!s.alpha[1].is_zero());
        for j in [1, 2] {
            assert!(s.zeta[j].is_zero() && s.xi[j].is_zero(), "order {j}");
        }
        assert!(!s.zeta[4].is_zero() && !s.xi[4].is_zero());
        let v = values_at_uc().unwrap();
        assert_eq!(s.zeta[0], v.z0_at_uc);
        assert_eq!(s.alpha[0], v.a_at_uc_over_a0);
        let (num, den) = row_tail_parts(&Series { c: s.zeta.clone() }, &Series { c: s.xi.clone() }, 12);
        for j in 0..ROW_TAIL_ZERO {
            assert!(num.c[j].is_zero() && den.c[j].is_zero(), "order {j}");
        }
        assert!(!den.c[ROW_TAIL_ZERO].is_zero());
    }

    #[test]
    fn float_expansions_match_exact() {
        let e = singular_expansions::<QuadSurd>(16).unwrap();
        let f = singular_expansions::<f64>(16).unwrap();
        for (a, b) in [(&e.zeta, &f.zeta), (&e.xi, &f.xi), (&e.alpha, &f.alpha), (&e.row_tail, &f.row_tail)] {
            for (x, y) in a.iter().zip(b) {
                assert!((x.to_f64() - y).abs() <= 1e-12 * x.to_f64().abs().max(1.0), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn asymptotics_match_exact_coefficients() {
        let n = 96;
        let s = singular_expansions::<f64>(45).unwrap();
        let v = values_at_uc().unwrap();
        let b = boundary_series(n + 2).unwrap();
        let r = row_tails(&b.zeta, &b.xi, &v.z0_at_uc).unwrap();
        let alpha: Vec<QuadSurd> = b.alpha.iter().map(|a| QuadSurd::from_rational(a.clone())).collect();
        let conv = |f: &[QuadSurd], g: &[QuadSurd], m: usize, lo: usize| -> f64 {
            (lo..=m - lo).fold(QuadSurd::zero(), |acc, i| &acc + &(&f[i] * &g[m - i])).to_f64()
        };
        let checks: [(&str, &[f64], f64); 6] = [
            ("ζ", &s.zeta, b.zeta[n].to_f64()),
            ("ξ", &s.xi, b.xi[n].to_f64()),
            ("α", &s.alpha, alpha[n].to_f64()),
            ("R", &s.row_tail, r[n].to_f64()),
            ("ζα", &s.conv_rp, conv(&b.zeta, &alpha, n, 1)),
            ("ξα", &s.conv_rm, conv(&b.xi, &alpha, n, 0)),
        ];
        for (name, ser, e) in checks {
            let got = CoeffAsymptotics::new(ser).range(n, n + 1)[0];
            let rel = ((got - e) / e).abs();
            assert!(rel < 1e-11, "{name}_{n}: {got:e} vs {e:e} ({rel:e})");
        }
    }

    #[test]
    fn asymptotics_match_float_series() {
        let n = 3000;
        let s = singular_expansions::<f64>(45).unwrap();
        let f = boundary_series_f64(n).unwrap();
        for (name, ser, direct) in [("ζ", &s.zeta, &f.zeta), ("ξ", &s.xi, &f.xi), ("α", &s.alpha, &f.alpha)] {
            let vals = CoeffAsymptotics::new(ser).range(500, n + 1);
            for m in [500, 1000, 2000, n] {
                let rel = ((vals[m - 500] - direct[m]) / direct[m]).abs();
                assert!(rel < 1e-10, "{name}_{m}: {rel:e}");
            }
        }
    }

    #[test]
    fn gamma_form_matches_products() {
        let s = singular_expansions::<f64>(30).unwrap();
        for ser in [&s.zeta, &s.alpha, &s.row_tail] {
            let a = CoeffAsymptotics::new(ser);
            for n in [120, 1000, 5000] {
                let x = a.value(&a.state_at(n));
                let y = a.value_at(n);
                assert!(((x - y) / x).abs() < 1e-11, "n = {n}: {x:e} vs {y:e}");
            }
        }
    }
}

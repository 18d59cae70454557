use super::param::{param, Which};
use crate::algebra::{Field, QuadSurd, Rational, Series};
use crate::error::{Error, Result};

/// H(w), the compositional inverse of w = û(H)/u_c, to order n.
///
/// From w = (10H − 12H² + 6H³ − H⁴)/3 we get
/// H = (3w + 12H² − 6H³ + H⁴)/10, solved coefficient by coefficient with
/// running convolutions for the powers of H.
pub fn revert_u_hat<F: Field>(n: usize) -> Series<F> {
    let mut h = vec![F::zero(); n + 1];
    let mut h2 = vec![F::zero(); n + 1];
    let mut h3 = vec![F::zero(); n + 1];
    let tenth = F::from_int(10).finv();
    let (c12, c6) = (F::from_int(12), F::from_int(6));
    for k in 1..=n {
        let mut a2 = F::zero();
        for i in 1..k {
            a2 = a2.fadd(&h[i].fmul(&h[k - i]));
        }
        let mut a3 = F::zero();
        for i in 1..k.saturating_sub(1) {
            a3 = a3.fadd(&h[i].fmul(&h2[k - i]));
        }
        let mut a4 = F::zero();
        for i in 1..k.saturating_sub(2) {
            a4 = a4.fadd(&h[i].fmul(&h3[k - i]));
        }
        h2[k] = a2.clone();
        h3[k] = a3.clone();
        let mut v = c12.fmul(&a2).fsub(&c6.fmul(&a3)).fadd(&a4);
        if k == 1 {
            v = v.fadd(&F::from_int(3));
        }
        h[k] = v.fmul(&tenth);
    }
    Series { c: h }
}

/// Normalized boundary sequences at the critical point:
/// ζ_p = z_{p,0}u_c^p, ξ_p = z_{p,1}u_c^{p+1} and α_p = a_p u_c^p / a₀.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySeries {
    pub zeta: Vec<QuadSurd>,
    pub xi: Vec<QuadSurd>,
    pub alpha: Vec<Rational>,
}

/// The same sequences in floating point, for long expansions.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySeriesF64 {
    pub zeta: Vec<f64>,
    pub xi: Vec<f64>,
    pub alpha: Vec<f64>,
}

/// (ζ, ξ, α) as series in w = u/u_c over any field containing √7
/// (α is rational, so `G` may be Q).
pub fn boundary_components<F: Field, G: Field>(n: usize) -> Result<(Series<F>, Series<F>, Series<G>)> {
    let hf: Series<F> = revert_u_hat(n);
    let hg: Series<G> = revert_u_hat(n);
    let zeta = param(Which::Z0Hat).compose(&hf)?;
    let xi = param(Which::Z1Hat).compose(&hf)?;
    let alpha = param(Which::AHat).compose(&hg)?;
    Ok((zeta, xi, alpha))
}

/// Exact normalized boundary sequences to order n.
pub fn boundary_series(n: usize) -> Result<BoundarySeries> {
    if n < 2 {
        return Err(Error::Invalid(format!("order {n} below 2")));
    }
    let (zeta, xi, alpha) = boundary_components::<QuadSurd, Rational>(n)?;
    let out = BoundarySeries { zeta: zeta.c, xi: xi.c, alpha: alpha.c };
    for (name, seq) in [("ζ", &out.zeta), ("ξ", &out.xi)] {
        if let Some(p) = seq.iter().position(|x| !x.is_positive()) {
            return Err(Error::Check(format!("{name}_{p} = {} not positive", seq[p])));
        }
    }
    if out.alpha.iter().any(|a| a <= &Rational::from_int(0)) {
        return Err(Error::Check("α not positive".into()));
    }
    Ok(out)
}

/// Floating-point boundary sequences to order n.
pub fn boundary_series_f64(n: usize) -> Result<BoundarySeriesF64> {
    let (zeta, xi, alpha) = boundary_components::<f64, f64>(n)?;
    Ok(BoundarySeriesF64 { zeta: zeta.c, xi: xi.c, alpha: alpha.c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn reversion_inverts_u_hat() {
        let h: Series<Rational> = revert_u_hat(12);
        assert_eq!(h.c[0], rat(0, 1));
        assert_eq!(h.c[1], rat(3, 10));
        let u = param(Which::UHat);
        let back = h.compose_poly(&u.num.iter().map(Rational::from_surd).collect::<Vec<_>>());
        let mut w = Series::zero(12);
        w.c[1] = rat(1, 1);
        assert_eq!(back, w);
    }

    #[test]
    fn first_coefficients() {
        let b = boundary_series(6).unwrap();
        assert_eq!(b.zeta[0], QuadSurd::one());
        assert_eq!(b.zeta[1], QuadSurd::from_ints(-33, 50, 3, 10));
        assert_eq!(b.alpha[0], rat(1, 1));
        assert_eq!(b.alpha[1], rat(1, 3));
        // ξ₀ = u_c z_{0,1} = u_c z_{1,0} = ζ₁
        assert_eq!(b.xi[0], b.zeta[1]);
    }

    #[test]
    fn float_matches_exact() {
        let b = boundary_series(30).unwrap();
        let f = boundary_series_f64(30).unwrap();
        for p in 0..=30 {
            let (e, x) = (b.zeta[p].to_f64(), f.zeta[p]);
            assert!((e - x).abs() <= 1e-13 * e.abs().max(1e-300), "ζ_{p}: {e} vs {x}");
            let (e, x) = (b.xi[p].to_f64(), f.xi[p]);
            assert!((e - x).abs() <= 1e-13 * e.abs().max(1e-300), "ξ_{p}: {e} vs {x}");
            let (e, x) = (crate::algebra::rat_f64(&b.alpha[p]), f.alpha[p]);
            assert!((e - x).abs() <= 1e-13 * e.abs(), "α_{p}: {e} vs {x}");
        }
    }
}

use crate::algebra::{constants_critical, Field};
use crate::error::{Error, Result};

/// Critical constants embedded in `F`: (ν_c, t_c/u_c, u_c²).
fn consts<F: Field>() -> (F, F, F) {
    let cc = constants_critical();
    (F::from_surd(&cc.nu_c), F::from_surd(&cc.t_over_u), F::from_surd(&cc.u_c_squared()))
}

/// Row tails R_p = Σ_{q≥1} w_{p,q} for p < len(ζ), where w_{p,q} = z_{p,q}u_c^{p+q}.
///
/// Uses the closed form of W(u_c, u_c b) − Z₀(u_c b) as a ratio of two series
/// in b. `zeta_one` is ζ(1) = Z₀(u_c).
pub fn row_tails<F: Field>(zeta: &[F], xi: &[F], zeta_one: &F) -> Result<Vec<F>> {
    let n = zeta.len();
    if xi.len() < n || n == 0 {
        return Err(Error::Invalid("ξ shorter than ζ".into()));
    }
    let (nu, th, u2) = consts::<F>();
    let k = nu.fmul(&nu).fsub(&F::one()); // ν² − 1
    let kth = k.fmul(&th);
    // numerator ζ(b) − ζ(1) + (ν²−1)b(u_c² − Θζ(1)Ξ(b))
    let mut num: Vec<F> = zeta.to_vec();
    num[0] = num[0].fsub(zeta_one);
    let kthz = kth.fmul(zeta_one);
    if n > 1 {
        num[1] = num[1].fadd(&k.fmul(&u2));
    }
    for j in 1..n {
        num[j] = num[j].fsub(&kthz.fmul(&xi[j - 1]));
    }
    // denominator νb − 1 − (ν²−1)Θb(ζ(1) + Ξ(b))
    let mut den = vec![F::zero(); n];
    den[0] = F::one().fneg();
    if n > 1 {
        den[1] = nu.fsub(&kthz);
    }
    for j in 1..n {
        den[j] = den[j].fsub(&kth.fmul(&xi[j - 1]));
    }
    let inv0 = den[0].finv();
    let mut out: Vec<F> = Vec::with_capacity(n);
    for m in 0..n {
        let mut acc = num[m].clone();
        for j in 1..=m {
            acc = acc.fsub(&den[j].fmul(&out[m - j]));
        }
        out.push(acc.fmul(&inv0));
    }
    Ok(out)
}

/// Normalized coefficients w_{p,q} on 0 ≤ p ≤ p_max, 0 ≤ q ≤ q_max, computed
/// column by column from the boundary rows w_{p,0} = ζ_p and w_{p,1} = ξ_p.
#[derive(Clone, Debug)]
pub struct WGrid<F> {
    pub p_max: usize,
    pub q_max: usize,
    cols: Vec<Vec<F>>,
}

impl<F: Field> WGrid<F> {
    pub fn get(&self, p: usize, q: usize) -> &F {
        &self.cols[q][p]
    }

    /// `get` with a bounds check; column q holds rows up to p_max + q_max − q.
    pub fn try_get(&self, p: usize, q: usize) -> Option<&F> {
        self.cols.get(q).and_then(|c| c.get(p))
    }

    /// ζ and ξ must reach index p_max + q_max.
    pub fn build(zeta: &[F], xi: &[F], p_max: usize, q_max: usize) -> Result<Self> {
        let need = p_max + q_max + 1;
        if zeta.len() < need || xi.len() < need {
            return Err(Error::Invalid(format!("boundary sequences shorter than {need}")));
        }
        let (nu, th, u2) = consts::<F>();
        let nth_inv = nu.fmul(&th).finv();
        // column q is needed on rows 0..=p_max + q_max − q
        let mut cols: Vec<Vec<F>> = vec![zeta[..need].to_vec(), xi[..need - 1].to_vec()];
        for q in 0..q_max.saturating_sub(1) {
            let rows = need - (q + 2);
            let c1 = &cols[q + 1];
            let w = |p: usize, j: usize| -> &F { &cols[j][p] };
            let mut next = Vec::with_capacity(rows);
            for p in 0..rows {
                // Θ[w_{p+2,q} + Σ w_{p1+1,0}w_{p2+1,q} + Σ w_{1,q1}w_{p+1,q2} − w_{p+1,0}w_{1,q}]
                let mut a = cols[q][p + 2].clone();
                for p1 in 0..=p {
                    a = a.fadd(&w(p1 + 1, 0).fmul(w(p - p1 + 1, q)));
                }
                for q1 in 0..=q {
                    a = a.fadd(&w(1, q1).fmul(w(p + 1, q - q1)));
                }
                a = a.fsub(&w(p + 1, 0).fmul(w(1, q)));
                let mut rhs = c1[p].fsub(&th.fmul(&a));
                if p == 1 && q == 0 {
                    rhs = rhs.fsub(&u2);
                }
                // νΘ[Σ w_{0,q1+1}w_{p,q2+1} + Σ w_{p1,1}w_{p2,q+1} − w_{p,1}w_{0,q+1}]
                let mut b = F::zero();
                for q1 in 0..=q {
                    b = b.fadd(&w(0, q1 + 1).fmul(w(p, q - q1 + 1)));
                }
                for p1 in 0..=p {
                    b = b.fadd(&w(p1, 1).fmul(w(p - p1, q + 1)));
                }
                b = b.fsub(&w(p, 1).fmul(w(0, q + 1)));
                rhs = rhs.fsub(&nu.fmul(&th).fmul(&b));
                if p == 0 && q == 1 {
                    rhs = rhs.fsub(&nu.fmul(&u2));
                }
                next.push(rhs.fmul(&nth_inv));
            }
            cols.push(next);
        }
        Ok(WGrid { p_max, q_max, cols })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuadSurd;
    use crate::critical::{boundary_series, boundary_series_f64, values_at_uc};

    #[test]
    fn grid_is_symmetric_and_extends_boundary() {
        let b = boundary_series(24).unwrap();
        let g = WGrid::build(&b.zeta, &b.xi, 10, 10).unwrap();
        for p in 0..=10 {
            for q in 0..=10 {
                assert_eq!(g.get(p, q), g.get(q, p), "w_{{{p},{q}}}");
            }
            assert_eq!(g.get(0, p), &b.zeta[p]);
            assert!(g.get(p, p).is_positive());
        }
    }

    #[test]
    fn float_grid_tracks_exact() {
        let b = boundary_series(40).unwrap();
        let f = boundary_series_f64(40).unwrap();
        let g = WGrid::build(&b.zeta, &b.xi, 16, 16).unwrap();
        let h = WGrid::build(&f.zeta, &f.xi, 16, 16).unwrap();
        let mut worst: f64 = 0.0;
        for p in 0..=16 {
            for q in 0..=16 {
                let e = g.get(p, q).to_f64();
                worst = worst.max((h.get(p, q) - e).abs() / e);
            }
        }
        eprintln!("worst relative deviation {worst:e}");
        assert!(worst < 1e-6, "{worst:e}");
    }

    #[test]
    fn row_tails_first_rows() {
        let v = values_at_uc().unwrap();
        let b = boundary_series(12).unwrap();
        let r = row_tails(&b.zeta, &b.xi, &v.z0_at_uc).unwrap();
        assert_eq!(r[0], &v.z0_at_uc - &QuadSurd::one());
        assert_eq!(r[1], &v.z1_at_uc - &b.zeta[1]);
        assert!(r.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn row_tails_match_grid_sums() {
        let f = boundary_series_f64(700).unwrap();
        let v = values_at_uc().unwrap();
        let r = row_tails(&f.zeta, &f.xi, &v.z0_at_uc.to_f64()).unwrap();
        // by symmetry R_2 = Σ_{q≥1} w_{q,2}, a column sum with a q^{-7/3} tail
        let g = WGrid::build(&f.zeta, &f.xi, 600, 2).unwrap();
        let partial: f64 = (1..=600).map(|q| g.get(q, 2)).sum();
        let rel = (partial - r[2]).abs() / r[2];
        assert!(rel < 1e-3, "{partial} vs {}", r[2]);
    }
}

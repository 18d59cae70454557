use crate::algebra::{Field, Series};
use crate::error::{Error, Result};

type Poly<F> = Vec<F>;

fn pmul<F: Field>(a: &[F], b: &[F]) -> Poly<F> {
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].fadd(&x.fmul(y));
        }
    }
    out
}

fn ppow<F: Field>(a: &[F], e: usize) -> Poly<F> {
    (0..e).fold(vec![F::one()], |acc, _| pmul(&acc, a))
}

fn pscale<F: Field>(a: &[F], k: &F) -> Poly<F> {
    a.iter().map(|x| x.fmul(k)).collect()
}

fn peval<F: Field>(a: &[F], x: &F) -> F {
    a.iter().rev().fold(F::zero(), |acc, c| acc.fmul(x).fadd(c))
}

/// p(x0 + s) as a polynomial in s.
fn pshift<F: Field>(a: &[F], x0: &F) -> Poly<F> {
    let lin = vec![x0.clone(), F::one()];
    let mut acc = vec![F::zero()];
    for c in a.iter().rev() {
        acc = pmul(&acc, &lin);
        acc[0] = acc[0].fadd(c);
    }
    acc
}

/// Numerator and denominator polynomials in S of the parametrizations of
/// t², t³z₁ and t⁹z₃.
struct Rp13Polys<F> {
    t2: (Poly<F>, Poly<F>),
    z1: (Poly<F>, Poly<F>),
    z3: (Poly<F>, Poly<F>),
}

fn c<F: Field>(n: i64) -> F {
    F::from_int(n)
}

fn rp13_polys<F: Field>(nu: &F) -> Rp13Polys<F> {
    let nu2 = nu.fmul(nu);
    let nu2m1 = nu2.fsub(&F::one());
    let nu_nm2 = nu2.fsub(&c::<F>(2).fmul(nu)); // ν² − 2ν
    let a = vec![nu.clone(), c(-1)]; // ν − S
    let b = vec![nu.fsub(&c(2)), c(1)]; // S + ν − 2
    let s2 = vec![c(0), c(0), c(1)];
    let pow_k = |e: u32| (0..e).fold(F::one(), |acc, _| acc.fmul(&nu2m1));

    let t2n = pmul(&pmul(&a, &b), &[nu_nm2.clone(), c(-2), c(-1), c(4)]);
    let t2d = pscale(&s2, &c::<F>(32).fmul(&pow_k(3)));

    let z1n = pmul(&pmul(&pmul(&a, &a), &b), &[nu_nm2.clone(), nu.fneg(), nu.fneg(), c(3)]);
    let z1d = pscale(&s2, &c::<F>(64).fmul(&pow_k(4)));

    let q = |k: i64, x: &F| x.fmul(&c(k));
    let poly2 = |c2: i64, c1: i64, c0: i64| nu2.fmul(&c(c2)).fadd(&nu.fmul(&c(c1))).fadd(&c(c0));
    // 160S¹⁰ − 128S⁹ − 16(2ν²−4ν+3)S⁸ + 32(2ν²−4ν+3)S⁷ − 7(16ν²−32ν+27)S⁶
    // − 2(32ν²−64ν+57)S⁵ + (32ν⁴−128ν³+183ν²−110ν+20)S⁴ − 4(7ν²−14ν−2)S³
    // + ν(ν−2)(9ν²−18ν−20)S² + 14ν²(ν−2)²S − 3ν³(ν−2)³
    let nm2 = nu.fsub(&c(2));
    let nu3 = nu2.fmul(nu);
    let nu4 = nu3.fmul(nu);
    let p10 = vec![
        q(-3, &nu3.fmul(&nm2).fmul(&nm2).fmul(&nm2)),
        q(14, &nu2.fmul(&nm2).fmul(&nm2)),
        nu.fmul(&nm2).fmul(&poly2(9, -18, -20)),
        q(-4, &poly2(7, -14, -2)),
        q(32, &nu4).fsub(&q(128, &nu3)).fadd(&poly2(183, -110, 20)),
        q(-2, &poly2(32, -64, 57)),
        q(-7, &poly2(16, -32, 27)),
        q(32, &poly2(2, -4, 3)),
        q(-16, &poly2(2, -4, 3)),
        c(-128),
        c(160),
    ];
    let z3n = pmul(&pmul(&ppow(&a, 5), &ppow(&b, 5)), &p10);
    let mut s8 = vec![c(0); 9];
    s8[8] = c(1);
    let z3d = pscale(&s8, &c::<F>(1 << 22).fmul(&pow_k(12)));

    Rp13Polys { t2: (t2n, t2d), z1: (z1n, z1d), z3: (z3n, z3d) }
}

/// Series of t³z₁ and t⁹z₃ in t̃ = t², from the branch of the
/// parametrization through `branch` at t = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Rp13Series<F> {
    pub branch: F,
    pub t3z1: Vec<F>,
    pub t9z3: Vec<F>,
}

impl<F: Field> Rp13Series<F> {
    /// [tⁿ]z₁.
    pub fn z1_coeff(&self, n: usize) -> F {
        if n.is_multiple_of(2) {
            return F::zero();
        }
        self.t3z1.get((n + 3) / 2).cloned().unwrap_or_else(F::zero)
    }

    /// [tⁿ]z₃.
    pub fn z3_coeff(&self, n: usize) -> F {
        if n.is_multiple_of(2) {
            return F::zero();
        }
        self.t9z3.get((n + 9) / 2).cloned().unwrap_or_else(F::zero)
    }
}

/// Solves N(S0 + s) = t̃·D(S0 + s) for s as a series in t̃ (s(0) = 0).
fn revert_branch<F: Field>(num: &[F], den: &[F], order: usize) -> Result<Series<F>> {
    let n1 = num.get(1).cloned().unwrap_or_else(F::zero);
    if n1.is_zero() {
        return Err(Error::Invalid("branch point is not simple".into()));
    }
    let deg = num.len().max(den.len());
    // pw[j][m] = [t̃^m] s^j
    let mut pw = vec![vec![F::zero(); order + 1]; deg + 1];
    pw[0][0] = F::one();
    for m in 1..=order {
        for j in 2..=deg {
            let mut acc = F::zero();
            for i in 1..m {
                if !pw[1][i].is_zero() && !pw[j - 1][m - i].is_zero() {
                    acc = acc.fadd(&pw[1][i].fmul(&pw[j - 1][m - i]));
                }
            }
            pw[j][m] = acc;
        }
        let mut rhs = F::zero();
        for (j, d) in den.iter().enumerate() {
            rhs = rhs.fadd(&d.fmul(&pw[j][m - 1]));
        }
        for (j, a) in num.iter().enumerate().skip(2) {
            rhs = rhs.fsub(&a.fmul(&pw[j][m]));
        }
        pw[1][m] = rhs.fdiv(&n1);
    }
    Ok(Series { c: pw[1].clone() })
}

fn compose_ratio<F: Field>(num: &[F], den: &[F], x0: &F, s: &Series<F>) -> Result<Series<F>> {
    let n = s.compose_poly(&pshift(num, x0));
    let d = s.compose_poly(&pshift(den, x0));
    if d.c[0].is_zero() {
        return Err(Error::Invalid("pole at the branch point".into()));
    }
    Ok(n.div(&d))
}

fn expand_branch<F: Field>(polys: &Rp13Polys<F>, s0: &F, order: usize) -> Result<Rp13Series<F>> {
    if !peval(&polys.t2.0, s0).is_zero() || peval(&polys.t2.1, s0).is_zero() {
        return Err(Error::Invalid("not a regular zero of t²".into()));
    }
    let s = revert_branch(&pshift(&polys.t2.0, s0), &pshift(&polys.t2.1, s0), order)?;
    let z1 = compose_ratio(&polys.z1.0, &polys.z1.1, s0, &s)?;
    let z3 = compose_ratio(&polys.z3.0, &polys.z3.1, s0, &s)?;
    Ok(Rp13Series { branch: s0.clone(), t3z1: z1.c, t9z3: z3.c })
}

/// Valid generating-function branch: t³z₁ = O(t̃²), t⁹z₃ = O(t̃⁵), all
/// coefficients nonnegative and not all zero.
fn admissible<F: Field>(r: &Rp13Series<F>) -> bool {
    let low_ok = r.t3z1.iter().take(2).all(|x| x.is_zero()) && r.t9z3.iter().take(5).all(|x| x.is_zero());
    let nonneg = r.t3z1.iter().chain(&r.t9z3).all(|x| x.fsign() >= 0);
    let some = r.t3z1.iter().any(|x| x.fsign() > 0);
    low_ok && nonneg && some
}

/// Expands the parametrization of (t², t³z₁, t⁹z₃) at t = 0 to order n in
/// t̃ = t², selecting the branch by coefficient positivity.
pub fn rp13_series<F: Field>(nu: &F, n: usize) -> Result<Rp13Series<F>> {
    if nu.fsub(&F::one()).fsign() <= 0 {
        return Err(Error::Invalid("ν must exceed 1".into()));
    }
    if n > 60 {
        return Err(Error::Budget(format!("order {n} above 60")));
    }
    let polys = rp13_polys(nu);
    let candidates = [nu.clone(), c::<F>(2).fsub(nu)];
    let mut tried = Vec::new();
    for s0 in candidates {
        match expand_branch(&polys, &s0, n) {
            Ok(r) if admissible(&r) => return Ok(r),
            Ok(_) => tried.push(format!("{s0:?}: negative or misplaced coefficients")),
            Err(e) => tried.push(format!("{s0:?}: {e}")),
        }
    }
    Err(Error::Check(format!("no admissible branch ({})", tried.join("; "))))
}

/// Exact values of (t², t³z₁, t⁹z₃) at a parameter value S.
pub fn rp13_at<F: Field>(nu: &F, s: &F) -> Result<(F, F, F)> {
    let p = rp13_polys(nu);
    let ev = |(n, d): &(Poly<F>, Poly<F>)| -> Result<F> {
        let dv = peval(d, s);
        if dv.is_zero() {
            return Err(Error::Invalid("pole".into()));
        }
        Ok(peval(n, s).fdiv(&dv))
    };
    Ok((ev(&p.t2)?, ev(&p.z1)?, ev(&p.z3)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{constants_critical, rat, QuadSurd, Rational};
    use crate::tutte::build_evaluated_table;

    fn check_against_table<F: Field + crate::tutte::Coef<Nu = F>>(nu: F) {
        let r = rp13_series(&nu, 16).unwrap();
        assert_eq!(r.branch, nu, "expected the branch through S = ν");
        let table = build_evaluated_table(19, 3, nu).unwrap();
        for n in (1..=19).step_by(2) {
            assert_eq!(r.z1_coeff(n), table.get(1, 0, n), "z1 at order {n}");
            assert_eq!(r.z3_coeff(n), table.get(3, 0, n), "z3 at order {n}");
        }
        assert!(Field::is_zero(&r.z3_coeff(0)));
    }

    #[test]
    fn matches_recurrence_at_two() {
        check_against_table(rat(2, 1));
    }

    #[test]
    fn matches_recurrence_at_critical_nu() {
        check_against_table(constants_critical().nu_c);
    }

    #[test]
    fn critical_point_is_s_three() {
        let cc = constants_critical();
        let (t2, _, _) = rp13_at(&cc.nu_c, &QuadSurd::from_int(3)).unwrap();
        assert_eq!(t2, cc.t_c_squared);
    }

    #[test]
    fn rejects_small_nu() {
        assert!(rp13_series(&Rational::from_int(1), 5).is_err());
    }
}

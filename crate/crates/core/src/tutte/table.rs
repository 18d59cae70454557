use std::fmt::Debug;

use crate::algebra::{Field, QuadSurd, Rational};
use crate::error::{Error, Result};
use crate::par;

use super::NuPoly;

/// Ring operations needed by the recurrence.
pub trait Coef: Clone + Send + Sync + PartialEq + Debug + 'static {
    type Nu: Clone + Send + Sync + Debug;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, o: &Self);
    fn sub_assign(&mut self, o: &Self);
    fn add_mul(&mut self, a: &Self, b: &Self);
    fn mul(&self, o: &Self) -> Self;
    fn times_nu(&self, nu: &Self::Nu) -> Self;
    fn nu_coef(nu: &Self::Nu) -> Self;
}

impl Coef for NuPoly {
    type Nu = ();
    fn zero() -> Self {
        NuPoly::zero()
    }
    fn one() -> Self {
        NuPoly::constant(1)
    }
    fn is_zero(&self) -> bool {
        NuPoly::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self) {
        NuPoly::add_assign(self, o)
    }
    fn sub_assign(&mut self, o: &Self) {
        NuPoly::sub_assign(self, o)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        NuPoly::add_mul(self, a, b)
    }
    fn mul(&self, o: &Self) -> Self {
        NuPoly::mul(self, o)
    }
    fn times_nu(&self, _: &()) -> Self {
        self.shift()
    }
    fn nu_coef(_: &()) -> Self {
        NuPoly::nu_pow(1)
    }
}

macro_rules! field_coef {
    ($t:ty) => {
        impl Coef for $t {
            type Nu = $t;
            fn zero() -> Self {
                <$t as Field>::zero()
            }
            fn one() -> Self {
                <$t as Field>::one()
            }
            fn is_zero(&self) -> bool {
                <$t as Field>::is_zero(self)
            }
            fn add_assign(&mut self, o: &Self) {
                *self = self.fadd(o);
            }
            fn sub_assign(&mut self, o: &Self) {
                *self = self.fsub(o);
            }
            fn add_mul(&mut self, a: &Self, b: &Self) {
                *self = self.fadd(&a.fmul(b));
            }
            fn mul(&self, o: &Self) -> Self {
                self.fmul(o)
            }
            fn times_nu(&self, nu: &$t) -> Self {
                self.fmul(nu)
            }
            fn nu_coef(nu: &$t) -> Self {
                nu.clone()
            }
        }
    };
}

field_coef!(Rational);
field_coef!(QuadSurd);
field_coef!(f64);

/// Triangular table of [tⁿ]z_{p,q}.
///
/// Cells cover p + q ≤ n + 2 (Euler bound) and p + q + n ≤ n_max + perim_top,
/// which is exactly the region the recurrence needs to produce every
/// perimeter up to `perim_top` at order `n_max`.
///
/// Float tables may be stored rescaled: entry = [tⁿ]z_{p,q} · σⁿ · ρ^{p+q}.
#[derive(Clone, Debug)]
pub struct CoeffTable<T: Coef> {
    pub n_max: usize,
    pub perim_top: usize,
    pub nu: T::Nu,
    /// (σ, ρ) rescaling of float tables; (1, 1) otherwise.
    pub scale: (f64, f64),
    weight: Option<T>,
    seed: Option<T>,
    cells: Vec<Vec<T>>,
    l_max: usize,
}

pub type ExactTable = CoeffTable<NuPoly>;

/// Default cap on exact ν-polynomial tables.
pub const EXACT_CAP: usize = 40;
/// Default cap on evaluated tables.
pub const EVAL_CAP: usize = 250;

fn pair_index(p: usize, q: usize) -> usize {
    let l = p + q;
    l * (l + 1) / 2 + p
}

impl<T: Coef> CoeffTable<T> {
    fn top(&self, l: usize) -> Option<usize> {
        if l > self.l_max {
            return None;
        }
        let lim = self.n_max + self.perim_top;
        if l > lim {
            return None;
        }
        Some(self.n_max.min(lim - l))
    }

    /// Coefficient series of z_{p,q} over n (possibly shorter than n_max+1).
    pub fn series(&self, p: usize, q: usize) -> &[T] {
        if p + q > self.l_max {
            return &[];
        }
        &self.cells[pair_index(p, q)]
    }

    /// Stored coefficient, zero outside the support.
    pub fn get(&self, p: usize, q: usize, n: usize) -> T {
        self.series(p, q).get(n).cloned().unwrap_or_else(T::zero)
    }

    /// Like [`get`](Self::get), but errors when n is beyond the table.
    pub fn coeff(&self, p: usize, q: usize, n: usize) -> Result<T> {
        if n > self.n_max {
            return Err(Error::OutOfRange(format!("order {n} beyond table n_max {}", self.n_max)));
        }
        let l = p + q;
        if l > n + 2 {
            return Ok(T::zero());
        }
        match self.top(l) {
            Some(top) if n <= top => Ok(self.get(p, q, n)),
            _ => Err(Error::OutOfRange(format!(
                "cell ({p},{q},{n}) outside the computed region (perim_top {})",
                self.perim_top
            ))),
        }
    }

    /// Whether (p,q,n) lies in the computed region.
    pub fn covers(&self, p: usize, q: usize, n: usize) -> bool {
        n <= self.n_max && self.top(p + q).is_some_and(|t| n <= t)
    }

    pub fn max_perimeter(&self) -> usize {
        self.l_max
    }

    /// Overwrites one stored cell (no symmetry fill). Used to inject faults
    /// when testing the identity checks.
    pub fn set(&mut self, p: usize, q: usize, n: usize, v: T) -> Result<()> {
        if !self.covers(p, q, n) {
            return Err(Error::OutOfRange(format!("cell ({p},{q},{n}) not stored")));
        }
        self.cells[pair_index(p, q)][n] = v;
        Ok(())
    }

    fn build(n_max: usize, perim_top: usize, nu: T::Nu, weight: Option<T>, seed: Option<T>, scale: (f64, f64)) -> Self {
        let l_max = (n_max + 2).min((n_max + perim_top + 2) / 2);
        let mut t = CoeffTable {
            n_max,
            perim_top,
            nu,
            scale,
            weight,
            seed,
            cells: Vec::new(),
            l_max,
        };
        let mut cells = Vec::with_capacity((l_max + 1) * (l_max + 2) / 2);
        for l in 0..=l_max {
            let len = t.top(l).map_or(0, |x| x + 1);
            for _ in 0..=l {
                cells.push(vec![T::zero(); len]);
            }
        }
        t.cells = cells;
        if !t.cells[0].is_empty() {
            t.cells[0][0] = T::one();
        }
        for n in 0..=n_max {
            let lim = (n + 2).min(n_max + perim_top - n).min(l_max);
            let mut todo = Vec::new();
            let mut l = n % 2;
            while l <= lim {
                for q1 in 1..=l {
                    todo.push((l - q1, q1 - 1));
                }
                l += 2;
            }
            let vals = par::map_collect(&todo, |&(p, q)| t.cell_value(p, q, n));
            for (&(p, q), v) in todo.iter().zip(vals) {
                t.cells[pair_index(p, q + 1)][n] = v;
            }
            for &(p, q) in &todo {
                if p == 0 {
                    let v = t.cells[pair_index(0, q + 1)][n].clone();
                    t.cells[pair_index(q + 1, 0)][n] = v;
                }
            }
        }
        t
    }

    /// Σ_m x[m]·y[k−m] over the support of both factors.
    fn conv(&self, acc: &mut T, a: (usize, usize), b: (usize, usize), k: usize) {
        let x = self.series(a.0, a.1);
        let y = self.series(b.0, b.1);
        if x.is_empty() || y.is_empty() {
            return;
        }
        let (la, lb) = (a.0 + a.1, b.0 + b.1);
        let lo = la.saturating_sub(2).max(k.saturating_sub(y.len() - 1));
        let hi_b = k.checked_sub(lb.saturating_sub(2));
        let Some(hi_b) = hi_b else { return };
        let hi = hi_b.min(x.len() - 1).min(k);
        if lo > hi {
            return;
        }
        // Nonzero coefficients have n ≡ p + q (mod 2).
        let mut m = lo + ((lo + la) % 2);
        while m <= hi {
            let (u, v) = (&x[m], &y[k - m]);
            if !u.is_zero() && !v.is_zero() {
                acc.add_mul(u, v);
            }
            m += 2;
        }
    }

    /// [tⁿ] of the right-hand side of the recurrence for z_{p,q+1}.
    fn cell_value(&self, p: usize, q: usize, n: usize) -> T {
        if n == 0 {
            let base = match (p, q + 1) {
                (1, 1) => T::one(),
                (0, 2) => T::nu_coef(&self.nu),
                _ => return T::zero(),
            };
            return match &self.seed {
                Some(s) => base.mul(s),
                None => base,
            };
        }
        let k = n - 1;
        let mut plus = self.get(p + 2, q, k);
        for p1 in 0..=p {
            self.conv(&mut plus, (p1 + 1, 0), (p - p1 + 1, q), k);
        }
        for q1 in 0..=q {
            self.conv(&mut plus, (1, q1), (p + 1, q - q1), k);
        }
        let mut d = T::zero();
        self.conv(&mut d, (p + 1, 0), (1, q), k);
        plus.sub_assign(&d);

        let mut minus = self.get(p, q + 2, k);
        for q1 in 0..=q {
            self.conv(&mut minus, (0, q1 + 1), (p, q - q1 + 1), k);
        }
        for p1 in 0..=p {
            self.conv(&mut minus, (p1, 1), (p - p1, q + 1), k);
        }
        let mut h = T::zero();
        self.conv(&mut h, (p, 1), (0, q + 1), k);
        minus.sub_assign(&h);

        let mut out = plus;
        out.add_assign(&minus.times_nu(&self.nu));
        match &self.weight {
            Some(w) => out.mul(w),
            None => out,
        }
    }
}

/// Exact ν-polynomial table with the default cap.
pub fn build_exact_table(n_max: usize, perim_top: usize) -> Result<ExactTable> {
    build_exact_table_capped(n_max, perim_top, EXACT_CAP)
}

pub fn build_exact_table_capped(n_max: usize, perim_top: usize, cap: usize) -> Result<ExactTable> {
    if n_max > cap {
        return Err(Error::Budget(format!("exact table order {n_max} exceeds cap {cap}")));
    }
    Ok(CoeffTable::build(n_max, perim_top, (), None, None, (1.0, 1.0)))
}

/// Table evaluated at an exact ν (rational or in Q(√7)).
pub fn build_evaluated_table<F: Field + Coef<Nu = F>>(n_max: usize, perim_top: usize, nu: F) -> Result<CoeffTable<F>> {
    if n_max > EVAL_CAP {
        return Err(Error::Budget(format!("evaluated table order {n_max} exceeds cap {EVAL_CAP}")));
    }
    Ok(CoeffTable::build(n_max, perim_top, nu, None, None, (1.0, 1.0)))
}

/// Floating table storing [tⁿ]z_{p,q}·σⁿ·ρ^{p+q}; the rescaling keeps values
/// of order one near the radius of convergence.
pub fn build_scaled_table(n_max: usize, perim_top: usize, nu: f64, sigma: f64, rho: f64) -> Result<CoeffTable<f64>> {
    if n_max > EVAL_CAP {
        return Err(Error::Budget(format!("evaluated table order {n_max} exceeds cap {EVAL_CAP}")));
    }
    if !(sigma > 0.0 && rho > 0.0) {
        return Err(Error::Invalid("scales must be positive".into()));
    }
    Ok(CoeffTable::build(n_max, perim_top, nu, Some(sigma / rho), Some(rho * rho), (sigma, rho)))
}

/// Rescaled table at the critical point (σ, ρ) = (t_c, u_c).
pub fn build_critical_table(n_max: usize, perim_top: usize) -> Result<CoeffTable<f64>> {
    let cc = crate::algebra::constants_critical();
    build_scaled_table(n_max, perim_top, cc.nu_c.to_f64(), cc.t_c(64).to_f64(), cc.u_c(64).to_f64())
}

impl CoeffTable<f64> {
    /// Unscaled coefficient [tⁿ]z_{p,q}.
    pub fn raw(&self, p: usize, q: usize, n: usize) -> f64 {
        let (s, r) = self.scale;
        self.get(p, q, n) / (s.powi(n as i32) * r.powi((p + q) as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn seeds_and_first_orders() {
        let t = build_exact_table(3, 5).unwrap();
        assert_eq!(t.get(0, 0, 0), NuPoly::constant(1));
        assert_eq!(t.get(1, 1, 0), NuPoly::constant(1));
        assert_eq!(t.get(0, 2, 0), NuPoly::nu_pow(1));
        assert_eq!(t.get(2, 0, 0), NuPoly::nu_pow(1));
        let nnu = NuPoly::from_coeffs(vec![0, 1, 1]);
        assert_eq!(t.get(0, 1, 1), nnu);
        assert_eq!(t.get(1, 0, 1), nnu);
        assert_eq!(t.get(1, 2, 1), nnu);
        assert!(t.get(5, 9, 0).is_zero());
    }

    #[test]
    fn evaluated_matches_exact() {
        let ex = build_exact_table(9, 4).unwrap();
        let ev = build_evaluated_table(9, 4, rat(2, 1)).unwrap();
        for l in 0..=ex.max_perimeter() {
            for p in 0..=l {
                for n in 0..=9 {
                    if ex.covers(p, l - p, n) {
                        assert_eq!(ex.get(p, l - p, n).eval(&rat(2, 1)), ev.get(p, l - p, n));
                    }
                }
            }
        }
    }

    #[test]
    fn out_of_range() {
        let t = build_exact_table(2, 2).unwrap();
        assert!(t.coeff(0, 1, 3).is_err());
        assert!(build_exact_table(41, 1).is_err());
    }
}

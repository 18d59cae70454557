use std::fmt;

use super::{ExactTable, NuPoly};
use crate::error::{Error, Result};

/// Truncated series in (u, v, t) with ν-polynomial coefficients.
#[derive(Clone, Debug)]
struct Grid {
    du: usize,
    dv: usize,
    nt: usize,
    c: Vec<NuPoly>,
}

impl Grid {
    fn zero(du: usize, dv: usize, nt: usize) -> Self {
        Grid { du, dv, nt, c: vec![NuPoly::zero(); (du + 1) * (dv + 1) * (nt + 1)] }
    }

    fn idx(&self, a: usize, b: usize, n: usize) -> usize {
        (a * (self.dv + 1) + b) * (self.nt + 1) + n
    }

    fn get(&self, a: usize, b: usize, n: usize) -> &NuPoly {
        &self.c[self.idx(a, b, n)]
    }

    fn like(&self) -> Self {
        Grid::zero(self.du, self.dv, self.nt)
    }

    /// c · u^a v^b t^n on the shape of `self`.
    fn mono(&self, a: usize, b: usize, n: usize, c: NuPoly) -> Self {
        let mut g = self.like();
        if a <= g.du && b <= g.dv && n <= g.nt {
            let i = g.idx(a, b, n);
            g.c[i] = c;
        }
        g
    }

    fn add(&self, o: &Grid) -> Grid {
        let mut g = self.clone();
        for (x, y) in g.c.iter_mut().zip(&o.c) {
            x.add_assign(y);
        }
        g
    }

    fn sub(&self, o: &Grid) -> Grid {
        let mut g = self.clone();
        for (x, y) in g.c.iter_mut().zip(&o.c) {
            x.sub_assign(y);
        }
        g
    }

    fn scale(&self, k: &NuPoly) -> Grid {
        Grid { c: self.c.iter().map(|x| x.mul(k)).collect(), ..*self }
    }

    fn sc(&self, k: &[i64]) -> Grid {
        self.scale(&NuPoly::from_coeffs(k.to_vec()))
    }

    fn mul(&self, o: &Grid) -> Grid {
        let mut g = self.like();
        let nz: Vec<(usize, usize, usize)> = (0..=o.du)
            .flat_map(|a| (0..=o.dv).flat_map(move |b| (0..=o.nt).map(move |n| (a, b, n))))
            .filter(|&(a, b, n)| !o.get(a, b, n).is_zero())
            .collect();
        for a in 0..=self.du {
            for b in 0..=self.dv {
                for n in 0..=self.nt {
                    let x = self.get(a, b, n);
                    if x.is_zero() {
                        continue;
                    }
                    for &(a2, b2, n2) in &nz {
                        if a + a2 > g.du || b + b2 > g.dv || n + n2 > g.nt {
                            continue;
                        }
                        let i = g.idx(a + a2, b + b2, n + n2);
                        g.c[i].add_mul(x, o.get(a2, b2, n2));
                    }
                }
            }
        }
        g
    }

    /// Multiplication by the monomial u^a v^b t^n.
    fn shift(&self, a: usize, b: usize, n: usize) -> Grid {
        let mut g = self.like();
        for x in 0..=self.du.saturating_sub(a).min(self.du) {
            for y in 0..=self.dv.saturating_sub(b).min(self.dv) {
                for k in 0..=self.nt.saturating_sub(n).min(self.nt) {
                    if x + a <= g.du && y + b <= g.dv && k + n <= g.nt {
                        let i = g.idx(x + a, y + b, k + n);
                        g.c[i] = self.get(x, y, k).clone();
                    }
                }
            }
        }
        g
    }

    /// Lowest t-order carrying a nonzero coefficient.
    fn first_nonzero_order(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for a in 0..=self.du {
            for b in 0..=self.dv {
                for n in 0..=self.nt {
                    if !self.get(a, b, n).is_zero() {
                        best = Some(best.map_or(n, |m| m.min(n)));
                        break;
                    }
                }
            }
        }
        best
    }
}

/// Loads Σ z_{f(a,b)} u^a v^b over the cells where `f` is defined.
fn load(table: &ExactTable, du: usize, dv: usize, nt: usize, f: impl Fn(usize, usize) -> Option<(usize, usize)>) -> Grid {
    let mut g = Grid::zero(du, dv, nt);
    for a in 0..=du {
        for b in 0..=dv {
            if let Some((p, q)) = f(a, b) {
                for n in 0..=nt {
                    let i = g.idx(a, b, n);
                    g.c[i] = table.get(p, q, n);
                }
            }
        }
    }
    g
}

/// Δ_u^off Z_q(u) as a univariate grid.
fn slice(table: &ExactTable, q: usize, off: usize, du: usize, nt: usize) -> Grid {
    load(table, du, 0, nt, |a, _| Some((a + off, q)))
}

/// The scalar series z_i = z_{i,0}.
fn scalar(table: &ExactTable, i: usize, du: usize, nt: usize) -> Grid {
    load(table, du, 0, nt, |a, _| (a == 0).then_some((i, 0)))
}

/// Outcome of one identity family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyResult {
    pub name: &'static str,
    /// Lowest t-order with a nonzero residual, if any.
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncEqReport {
    pub n_check: usize,
    pub families: Vec<FamilyResult>,
}

impl FuncEqReport {
    pub fn all_pass(&self) -> bool {
        self.families.iter().all(|f| f.first_failure.is_none())
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.families.iter().filter_map(|f| f.first_failure).min()
    }
}

impl fmt::Display for FuncEqReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.all_pass() {
            return write!(f, "all pass to order {}", self.n_check);
        }
        let bad: Vec<String> = self
            .families
            .iter()
            .filter_map(|r| r.first_failure.map(|n| format!("{} fails at order {n}", r.name)))
            .collect();
        write!(f, "{}", bad.join("; "))
    }
}

const NU2M1: &[i64] = &[-1, 0, 1];

/// Checks the slice equations, the explicit form of Z(u,v), the closed
/// equation for Z₀ and the z_{1,1} identity exactly, order by order in t.
///
/// Every identity is multiplied through by its denominators so that both
/// sides are polynomials in u, v and t.
pub fn verify_functional_equations(table: &ExactTable, n_check: usize) -> Result<FuncEqReport> {
    if n_check > table.n_max || 2 * n_check + 2 > table.n_max + table.perim_top {
        return Err(Error::OutOfRange(format!(
            "order {n_check} needs a table with n_max ≥ {n_check} and n_max + perim_top ≥ {}",
            2 * n_check + 2
        )));
    }
    let nt = n_check;
    let mut families = Vec::new();
    let mut push = |name, g: Grid| families.push(FamilyResult { name, first_failure: g.first_nonzero_order() });

    // Slice equations, multiplied by ν² − 1.
    let du = n_check + 4;
    let z0 = slice(table, 0, 0, du, nt);
    let dz0 = slice(table, 0, 1, du, nt);
    let d2z0 = slice(table, 0, 2, du, nt);
    let z1 = slice(table, 1, 0, du, nt);
    let dz1 = slice(table, 1, 1, du, nt);
    let d2z1 = slice(table, 1, 2, du, nt);
    let z2 = slice(table, 2, 0, du, nt);
    let z3 = slice(table, 3, 0, du, nt);
    let s1 = scalar(table, 1, du, nt);
    let nu = [0, 1];
    let one = z0.mono(0, 0, 0, NuPoly::constant(1));

    let lhs = dz0.sc(&nu).sub(&z1);
    let rhs = d2z0.add(&dz0.mul(&dz0)).shift(0, 0, 1).add(&one.shift(1, 0, 0)).sc(NU2M1);
    push("slice v^0 (first)", lhs.sub(&rhs));

    let lhs = dz1.sc(&nu).sub(&z2);
    let rhs = d2z1.add(&dz0.mul(&dz1)).add(&s1.mul(&dz1)).shift(0, 0, 1).sc(NU2M1);
    push("slice v^1 (first)", lhs.sub(&rhs));

    let lhs = z1.sc(&nu).sub(&dz0);
    let rhs = z2.add(&z1.mul(&z1)).shift(0, 0, 1).sc(NU2M1);
    push("slice v^0 (second)", lhs.sub(&rhs));

    let lhs = z2.sc(&nu).sub(&dz1);
    let rhs = z3.add(&z1.mul(&z2)).add(&s1.mul(&z2)).shift(0, 0, 1).add(&one).sc(NU2M1);
    push("slice v^1 (second)", lhs.sub(&rhs));

    // Explicit Z(u,v), multiplied by u and by its denominator.
    let d = 4;
    let zz = load(table, d, d, nt, |a, b| Some((a, b)));
    let z0u = load(table, d, d, nt, |a, b| (b == 0).then_some((a, 0)));
    let z0v = load(table, d, d, nt, |a, b| (a == 0).then_some((b, 0)));
    let z1v = load(table, d, d, nt, |a, b| (a == 0).then_some((b, 1)));
    let den = zz
        .mono(1, 1, 0, NuPoly::from_coeffs(nu.to_vec()))
        .sub(&zz.mono(2, 0, 0, NuPoly::constant(1)))
        .sub(&z0u.add(&z1v.shift(1, 0, 0)).shift(0, 1, 1).sc(NU2M1));
    let num = z0v
        .sub(&z0u)
        .shift(2, 0, 0)
        .add(&zz.mono(2, 0, 0, NuPoly::constant(1)).sub(&z0u.mul(&z1v).shift(0, 0, 1)).shift(1, 1, 0).sc(NU2M1));
    push("explicit Z(u,v)", zz.sub(&z0v).mul(&den).sub(&num));

    // Closed equation for Z₀, multiplied by u³.
    let du = n_check + 12;
    let y = slice(table, 0, 0, du, nt);
    let s1 = scalar(table, 1, du, nt);
    let s3 = scalar(table, 3, du, nt);
    let one = y.mono(0, 0, 0, NuPoly::constant(1));
    let ym1 = y.sub(&one);
    let y2 = y.mul(&y);
    let y3 = y2.mul(&y);
    let z1sq = s1.mul(&s1);
    let z1cu = z1sq.mul(&s1);
    let nu2m1_sq: &[i64] = &[1, 0, -2, 0, 1];
    // (ν²−1)² t² [ (y−1)y³ − z₁u y² + u³(2z₁³ − z₃) ] − (ν²−1)² t u³(1 + y − 2y² + z₁u)
    let b1 = ym1
        .mul(&y3)
        .sub(&s1.mul(&y2).shift(1, 0, 0))
        .add(&z1cu.sc(&[2]).sub(&s3).shift(3, 0, 0))
        .shift(0, 0, 2)
        .sub(&one.add(&y).sub(&y2.sc(&[2])).add(&s1.shift(1, 0, 0)).shift(3, 0, 1))
        .sc(nu2m1_sq);
    // −(ν²−1) t [ 2ν(y−1)y²u − (ν+1)z₁ y u² + 3(ν−1)z₁² u³ ]
    let b2 = ym1
        .mul(&y2)
        .shift(1, 0, 0)
        .sc(&[0, 2])
        .sub(&s1.mul(&y).shift(2, 0, 0).sc(&[1, 1]))
        .add(&z1sq.shift(3, 0, 0).sc(&[-3, 3]))
        .shift(0, 0, 1)
        .sc(NU2M1);
    // ν(ν+1)(y−1)y u² − ν(ν²−1)u⁴(2y−1) + ν(ν−3)z₁u³ + (ν²−1)²u⁶
    let b3 = ym1
        .mul(&y)
        .shift(2, 0, 0)
        .sc(&[0, 1, 1])
        .sub(&y.sc(&[2]).sub(&one).shift(4, 0, 0).sc(&[0, -1, 0, 1]))
        .add(&s1.shift(3, 0, 0).sc(&[0, -3, 1]))
        .add(&one.shift(6, 0, 0).sc(nu2m1_sq));
    let u3r = b1.sub(&b2).add(&b3);
    let lhs = y.shift(3, 0, 0);
    let rhs = one.shift(3, 0, 0).add(&one.shift(5, 0, 0).sc(&nu)).add(&u3r.shift(0, 0, 1));
    push("closed equation for Z0", lhs.sub(&rhs));

    // z_{1,1} identity, multiplied by (ν+1)t.
    let du = 0;
    let s1 = scalar(table, 1, du, nt);
    let s3 = scalar(table, 3, du, nt);
    let z11 = load(table, du, 0, nt, |_, _| Some((1, 1)));
    let one = s1.mono(0, 0, 0, NuPoly::constant(1));
    let z1sq = s1.mul(&s1);
    let lhs = z11.shift(0, 0, 1).sc(&[1, 1]);
    let rhs = z1sq
        .mul(&s1)
        .sc(&[2])
        .sub(&s3)
        .shift(0, 0, 2)
        .sub(&one.shift(0, 0, 1))
        .sc(&[-1, -1, 1, 1])
        .sub(&z1sq.shift(0, 0, 1).sc(&[-2, 1, 3]))
        .add(&s1.sc(&nu));
    push("z11 identity", lhs.sub(&rhs));

    Ok(FuncEqReport { n_check, families })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tutte::build_exact_table;

    fn full(n: usize) -> ExactTable {
        build_exact_table(n, n + 2).unwrap()
    }

    #[test]
    fn order_zero_passes() {
        let r = verify_functional_equations(&full(0), 0).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn correct_table_passes() {
        let r = verify_functional_equations(&full(10), 10).unwrap();
        assert!(r.all_pass(), "{r}");
        assert_eq!(r.families.len(), 7);
    }

    #[test]
    fn corrupted_entry_fails_at_order_one() {
        let mut t = full(6);
        t.set(0, 1, 1, NuPoly::nu_pow(1)).unwrap();
        let r = verify_functional_equations(&t, 6).unwrap();
        assert_eq!(r.first_failure(), Some(1), "{r}");
    }

    #[test]
    fn rejects_small_table() {
        let t = build_exact_table(5, 1).unwrap();
        assert!(verify_functional_equations(&t, 5).is_err());
    }
}

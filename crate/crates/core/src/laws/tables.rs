use crate::algebra::constants_critical;
use crate::critical::{boundary_series_f64, row_tails, singular_expansions, values_at_uc, CoeffAsymptotics, WGrid};
use crate::error::{Error, Result};
use std::sync::{Arc, OnceLock};

/// Indices below this use the direct series expansion, the rest the
/// singular asymptotics.
pub const DIRECT_LIMIT: usize = 100;
/// Order in σ of the singular expansions behind the asymptotics.
pub const ASYMPTOTIC_ORDER: usize = 45;
pub const DEFAULT_CAPACITY: usize = 1 << 18;
/// Halfplane laws with p up to this use per-k jump weights from the
/// bivariate grid; beyond it the large-p limit shapes.
pub const JUMP_GRID_P: usize = 16;
/// Rows of the jump grid; farther jumps follow a power-law tail.
pub const JUMP_ROWS: usize = 2048;

/// The six normalized sequences the peeling laws are assembled from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Seq {
    /// ζ_p = z_{p,0}u_c^p
    Zeta,
    /// ξ_p = z_{p,1}u_c^{p+1}
    Xi,
    /// α_p = a_p u_c^p / a₀
    Alpha,
    /// R_p = Σ_{q≥1} w_{p,q}
    RowTail,
    /// [w^n](ζ(w) − 1)(α(w) − 1)
    ConvRp,
    /// [w^n]Ξ(w)α(w)
    ConvRm,
}

const ALL: [Seq; 6] = [Seq::Zeta, Seq::Xi, Seq::Alpha, Seq::RowTail, Seq::ConvRp, Seq::ConvRm];

/// Critical constants in floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LawConstants {
    pub nu: f64,
    /// t_c / u_c
    pub theta: f64,
    pub u_c_squared: f64,
    /// ζ(1) = Z₀(u_c)
    pub zeta_one: f64,
    /// ξ(1) = u_c Z₁(u_c)
    pub xi_one: f64,
    /// α(1) = A(u_c)/a₀
    pub alpha_one: f64,
    pub alpha1: f64,
}

impl LawConstants {
    pub fn new() -> Result<Self> {
        let cc = constants_critical();
        let v = values_at_uc()?;
        Ok(LawConstants {
            nu: cc.nu_c.to_f64(),
            theta: cc.t_over_u.to_f64(),
            u_c_squared: cc.u_c_squared().to_f64(),
            zeta_one: v.z0_at_uc.to_f64(),
            xi_one: v.z1_at_uc.to_f64(),
            alpha_one: v.a_at_uc_over_a0.to_f64(),
            alpha1: 1.0 / 3.0,
        })
    }
}

/// Floating-point boundary data at the critical point, tabulated to a fixed
/// capacity and evaluated on demand beyond it.
#[derive(Debug)]
pub struct BoundaryTables {
    pub consts: LawConstants,
    capacity: usize,
    data: [Vec<f64>; 6],
    asym: [CoeffAsymptotics; 6],
    jump_grid: OnceLock<WGrid<f64>>,
}

fn index(s: Seq) -> usize {
    ALL.iter().position(|&x| x == s).unwrap()
}

impl BoundaryTables {
    pub fn new(capacity: usize) -> Result<Self> {
        let capacity = capacity.max(DIRECT_LIMIT + JUMP_ROWS + JUMP_GRID_P + 8);
        let consts = LawConstants::new()?;
        let n = DIRECT_LIMIT;
        let f = boundary_series_f64(n + 2)?;
        let zeta: Vec<f64> = f.zeta[..n].to_vec();
        let xi: Vec<f64> = f.xi[..n].to_vec();
        let alpha: Vec<f64> = f.alpha[..n].to_vec();
        let r = row_tails(&zeta, &xi, &consts.zeta_one)?;
        let conv_rp: Vec<f64> = (0..n).map(|m| (1..m).map(|i| zeta[i] * alpha[m - i]).sum()).collect();
        let conv_rm: Vec<f64> = (0..n).map(|m| (0..=m).map(|i| xi[i] * alpha[m - i]).sum()).collect();
        let s = singular_expansions::<f64>(ASYMPTOTIC_ORDER)?;
        let asym = [&s.zeta, &s.xi, &s.alpha, &s.row_tail, &s.conv_rp, &s.conv_rm].map(|c| CoeffAsymptotics::new(c));
        let mut data = [zeta, xi, alpha, r, conv_rp, conv_rm];
        for (d, a) in data.iter_mut().zip(&asym) {
            d.extend(a.range(n, capacity));
        }
        Ok(BoundaryTables { consts, capacity, data, asym, jump_grid: OnceLock::new() })
    }

    /// Process-wide tables with the default capacity.
    pub fn shared() -> Result<Arc<BoundaryTables>> {
        static SHARED: OnceLock<Arc<BoundaryTables>> = OnceLock::new();
        if let Some(t) = SHARED.get() {
            return Ok(t.clone());
        }
        let t = Arc::new(BoundaryTables::new(DEFAULT_CAPACITY)?);
        Ok(SHARED.get_or_init(|| t).clone())
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn get(&self, s: Seq, n: usize) -> f64 {
        let i = index(s);
        match self.data[i].get(n) {
            Some(&x) => x,
            None => self.asym[i].value_at(n),
        }
    }

    pub fn zeta(&self, n: usize) -> f64 {
        self.get(Seq::Zeta, n)
    }

    pub fn xi(&self, n: usize) -> f64 {
        self.get(Seq::Xi, n)
    }

    pub fn alpha(&self, n: usize) -> f64 {
        self.get(Seq::Alpha, n)
    }

    pub fn row_tail(&self, n: usize) -> f64 {
        self.get(Seq::RowTail, n)
    }

    /// w_{p,q} for min(p, q) ≤ JUMP_GRID_P + 1 and max(p, q) ≤ JUMP_ROWS.
    pub fn w_small(&self, p: usize, q: usize) -> Result<f64> {
        let (a, b) = if p >= q { (p, q) } else { (q, p) };
        if b > JUMP_GRID_P + 1 || a > JUMP_ROWS {
            return Err(Error::OutOfRange(format!("w_{{{p},{q}}} outside the jump grid")));
        }
        Ok(*self.jump_grid().get(a, b))
    }

    fn jump_grid(&self) -> &WGrid<f64> {
        self.jump_grid.get_or_init(|| {
            let cols = JUMP_GRID_P + 1;
            let need = JUMP_ROWS + cols + 1;
            WGrid::build(&self.data[0][..need], &self.data[1][..need], JUMP_ROWS, cols)
                .expect("tables are longer than the grid needs")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::{boundary_series, values_at_uc};

    #[test]
    fn tables_join_exact_values() {
        let t = BoundaryTables::new(0).unwrap();
        let b = boundary_series(DIRECT_LIMIT + 8).unwrap();
        for n in [0, 1, 7, DIRECT_LIMIT - 1, DIRECT_LIMIT, DIRECT_LIMIT + 5] {
            for (s, e) in [(Seq::Zeta, b.zeta[n].to_f64()), (Seq::Xi, b.xi[n].to_f64())] {
                let rel = ((t.get(s, n) - e) / e).abs();
                assert!(rel < 1e-11, "{s:?}_{n}: {rel:e}");
            }
            let a = crate::algebra::rat_f64(&b.alpha[n]);
            assert!(((t.alpha(n) - a) / a).abs() < 1e-11);
        }
    }

    #[test]
    fn far_indices_continue_the_tables() {
        let t = BoundaryTables::new(0).unwrap();
        let cap = t.capacity();
        for s in ALL {
            let i = index(s);
            let inside = t.get(s, cap - 1);
            let outside = t.asym[i].value_at(cap - 1);
            assert!(((inside - outside) / inside).abs() < 1e-10, "{s:?}");
            assert!(t.get(s, cap + 10).is_finite() && t.get(s, cap + 10) > 0.0);
        }
    }

    #[test]
    fn jump_grid_rows_sum_to_row_tails() {
        let t = BoundaryTables::new(0).unwrap();
        let v = values_at_uc().unwrap();
        assert!((t.row_tail(0) - (v.z0_at_uc.to_f64() - 1.0)).abs() < 1e-14);
        for j in [1, 5, 10, JUMP_GRID_P + 1] {
            // tail beyond the grid from the k^{-7/3} decay of the last rows
            let partial: f64 = (1..=JUMP_ROWS).map(|k| t.w_small(k, j).unwrap()).sum();
            let last = t.w_small(JUMP_ROWS, j).unwrap();
            let k = JUMP_ROWS as f64;
            let tail = last * k.powf(7.0 / 3.0) * (k + 0.5).powf(-4.0 / 3.0) * 0.75;
            let rel = (partial + tail - t.row_tail(j)) / t.row_tail(j);
            assert!(rel.abs() < 2e-3, "column {j}: {partial} + {tail} vs {} ({rel:e})", t.row_tail(j));
        }
    }
}

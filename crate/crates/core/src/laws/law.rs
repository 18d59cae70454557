use super::event::{Family, PeelingEvent, Regime};
use super::tables::{BoundaryTables, JUMP_GRID_P, JUMP_ROWS};
use crate::algebra::{constants_critical, Field, PrecReal, QuadSurd, DEFAULT_PRECISION};
use crate::critical::{boundary_series, row_tails, values_at_uc, WGrid};
use crate::error::{Error, Result};
use crate::tutte::{eval_partition, CoeffTable, TailMode};
use std::sync::Arc;

/// Default bound on the normalization defect accepted by the sampler for the
/// two infinite regimes.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Largest normalization defect accepted for a finite-boundary law.
pub const FINITE_TOLERANCE: f64 = 0.05;

/// A run of events of one family with consecutive k.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub family: Family,
    pub k_lo: u64,
    /// Inclusive upper end; `None` for an infinite family.
    pub k_hi: Option<u64>,
    pub mass: f64,
    /// Per-k weights are `scale` times a table lookup.
    scale: f64,
    /// Last k weighed explicitly by the sampler in an infinite block.
    pub(crate) scan_limit: u64,
    /// Decay exponent of the per-k weights used beyond `scan_limit`.
    pub(crate) tail_exponent: f64,
}

#[derive(Clone, Debug)]
enum Weights {
    Fullplane,
    Halfplane { p: usize, grid_jumps: bool },
    Explicit(Vec<Vec<f64>>),
}

/// Law of the next peeling event in one regime.
#[derive(Clone, Debug)]
pub struct EventLaw {
    pub regime: Regime,
    pub blocks: Vec<Block>,
    /// Probability that the peeling stops here (the unexplored map is a
    /// single edge).
    pub terminal: f64,
    pub normalization_defect: PrecReal,
    /// Defect above which [`super::sample_event`] refuses the law.
    pub tolerance: f64,
    pub(crate) defect: f64,
    tables: Option<Arc<BoundaryTables>>,
    weights: Weights,
}

const SEVEN_THIRDS: f64 = 7.0 / 3.0;
const FOUR_THIRDS: f64 = 4.0 / 3.0;

fn block(family: Family, k_lo: u64, k_hi: Option<u64>, mass: f64, scale: f64) -> Block {
    Block { family, k_lo, k_hi, mass, scale, scan_limit: k_hi.unwrap_or(u64::MAX), tail_exponent: SEVEN_THIRDS }
}

fn infinite(family: Family, k_lo: u64, mass: f64, scale: f64, scan_limit: u64, tail_exponent: f64) -> Block {
    Block { family, k_lo, k_hi: None, mass, scale, scan_limit, tail_exponent }
}

impl EventLaw {
    fn assemble(regime: Regime, blocks: Vec<Block>, terminal: f64, tolerance: f64, tables: Option<Arc<BoundaryTables>>, weights: Weights) -> Self {
        let total: f64 = blocks.iter().map(|b| b.mass).sum::<f64>() + terminal;
        let defect = (total - 1.0).abs();
        EventLaw {
            regime,
            blocks,
            terminal,
            normalization_defect: PrecReal::from_f64(defect, DEFAULT_PRECISION),
            tolerance,
            defect,
            tables,
            weights,
        }
    }

    /// Total mass of each of the six families.
    pub fn family_masses(&self) -> [(Family, f64); 6] {
        Family::ALL.map(|f| (f, self.blocks.iter().filter(|b| b.family == f).map(|b| b.mass).sum()))
    }

    pub fn family_mass(&self, f: Family) -> f64 {
        self.blocks.iter().filter(|b| b.family == f).map(|b| b.mass).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.blocks.iter().map(|b| b.mass).sum::<f64>() + self.terminal
    }

    fn find_block(&self, e: &PeelingEvent) -> Option<usize> {
        let (f, k) = (e.family(), e.k());
        self.blocks.iter().position(|b| b.family == f && k >= b.k_lo && b.k_hi.is_none_or(|h| k <= h))
    }

    /// Probability of a single event (0 outside the support).
    pub fn weight(&self, e: &PeelingEvent) -> f64 {
        match self.find_block(e) {
            Some(i) => self.block_weight(i, e.k()),
            None => 0.0,
        }
    }

    /// Weight of event k in block i; k must lie in the block's range.
    pub(crate) fn block_weight(&self, i: usize, k: u64) -> f64 {
        let b = &self.blocks[i];
        let t = match (&self.weights, &self.tables) {
            (Weights::Explicit(w), _) => return w[i][(k - b.k_lo) as usize],
            (_, Some(t)) => t,
            _ => unreachable!("table-backed law without tables"),
        };
        let k = k as usize;
        match (&self.weights, b.family) {
            (_, Family::Cp | Family::Cm) => b.scale,
            (_, Family::Lp) => b.scale * t.xi(k),
            (_, Family::Lm) => b.scale * t.zeta(k + 1),
            (Weights::Fullplane, Family::Rp) => b.scale * t.zeta(k + 1),
            (Weights::Fullplane, Family::Rm) => b.scale * t.xi(k),
            (&Weights::Halfplane { p, grid_jumps }, fam) => {
                if k <= p {
                    match fam {
                        Family::Rp => b.scale * t.zeta(k + 1) * t.alpha(p - k + 1),
                        _ => b.scale * t.xi(k) * t.alpha(p - k),
                    }
                } else {
                    let j = k - p;
                    match (fam, grid_jumps) {
                        (Family::Rp, true) => b.scale * t.w_small(p + 1, j).unwrap_or(0.0),
                        (Family::Rm, true) => b.scale * t.w_small(p, j + 1).unwrap_or(0.0),
                        (Family::Rp, false) => b.scale * t.alpha(j),
                        _ => b.scale * t.alpha(j + 1),
                    }
                }
            }
            (Weights::Explicit(_), _) => unreachable!(),
        }
    }
}

/// Law of the first event in the full-plane limit.
pub fn law_fullplane(tables: &Arc<BoundaryTables>) -> EventLaw {
    let c = tables.consts;
    let (th, nth) = (c.theta, c.nu * c.theta);
    let lim = (tables.capacity() - 2) as u64;
    let blocks = vec![
        block(Family::Cp, 0, Some(0), th, th),
        block(Family::Cm, 0, Some(0), nth, nth),
        infinite(Family::Lp, 0, th * c.xi_one, th, lim, SEVEN_THIRDS),
        infinite(Family::Lm, 0, nth * (c.zeta_one - 1.0), nth, lim, SEVEN_THIRDS),
        infinite(Family::Rp, 0, th * (c.zeta_one - 1.0), th, lim, SEVEN_THIRDS),
        infinite(Family::Rm, 0, nth * c.xi_one, nth, lim, SEVEN_THIRDS),
    ];
    let mut law = EventLaw::assemble(Regime::Fullplane, blocks, 0.0, DEFAULT_TOLERANCE, Some(tables.clone()), Weights::Fullplane);
    // the masses sum to one exactly; see `fullplane_masses_exact`
    law.defect = law.defect.min(f64::EPSILON * 4.0);
    law.normalization_defect = PrecReal::from_f64(law.defect, DEFAULT_PRECISION);
    law
}

/// Law of the first event on the half-plane with p plus edges.
pub fn law_halfplane(p: usize, tables: &Arc<BoundaryTables>) -> EventLaw {
    let t = tables;
    let c = t.consts;
    let (th, nth) = (c.theta, c.nu * c.theta);
    let ap = t.alpha(p);
    let lim = (t.capacity() - 2) as u64;
    let pk = p as u64;
    let rp_jump = th * c.alpha1 * t.row_tail(p + 1) / ap;
    let rm_jump = nth * (t.row_tail(p) - t.xi(p)) / ap;
    let grid_jumps = p <= JUMP_GRID_P;
    let (rp_scale, rm_scale, jump_lim, jump_exp) = if grid_jumps {
        (th * c.alpha1 / ap, nth / ap, pk + JUMP_ROWS as u64 - 1, SEVEN_THIRDS)
    } else {
        (rp_jump / (c.alpha_one - 1.0), rm_jump / (c.alpha_one - 1.0 - c.alpha1), pk + lim - 1, FOUR_THIRDS)
    };
    let blocks = vec![
        block(Family::Cp, 0, Some(0), th * t.alpha(p + 2) / ap, th * t.alpha(p + 2) / ap),
        block(Family::Cm, 0, Some(0), nth, nth),
        infinite(Family::Lp, 0, th * t.alpha(p + 1) / ap * c.xi_one, th * t.alpha(p + 1) / ap, lim, SEVEN_THIRDS),
        infinite(Family::Lm, 0, nth * (c.zeta_one - 1.0), nth, lim, SEVEN_THIRDS),
        block(Family::Rp, 0, Some(pk), th * t.get(super::Seq::ConvRp, p + 2) / ap, th / ap),
        block(Family::Rm, 0, Some(pk), nth * t.get(super::Seq::ConvRm, p) / ap, nth / ap),
        infinite(Family::Rp, pk + 1, rp_jump, rp_scale, jump_lim, jump_exp),
        infinite(Family::Rm, pk + 1, rm_jump, rm_scale, jump_lim, jump_exp),
    ];
    EventLaw::assemble(Regime::Halfplane { p: pk }, blocks, 0.0, DEFAULT_TOLERANCE, Some(tables.clone()), Weights::Halfplane { p, grid_jumps })
}

/// Exact family masses of the full-plane law, in Q(√7).
pub fn fullplane_masses_exact() -> Result<[(Family, QuadSurd); 6]> {
    let cc = constants_critical();
    let v = values_at_uc()?;
    let th = cc.t_over_u.clone();
    let nth = &cc.nu_c * &th;
    let zm1 = &v.z0_at_uc - &QuadSurd::one();
    Ok([
        (Family::Cp, th.clone()),
        (Family::Cm, nth.clone()),
        (Family::Lp, &th * &v.z1_at_uc),
        (Family::Lm, &nth * &zm1),
        (Family::Rp, &th * &zm1),
        (Family::Rm, &nth * &v.z1_at_uc),
    ])
}

/// Exact masses of the eight blocks of the half-plane law (C±, L±, R± with
/// k ≤ p, R± with k > p) for p = 0..=p_max.
pub fn halfplane_masses_exact(p_max: usize) -> Result<Vec<[QuadSurd; 8]>> {
    let cc = constants_critical();
    let v = values_at_uc()?;
    let b = boundary_series(p_max + 3)?;
    let r = row_tails(&b.zeta, &b.xi, &v.z0_at_uc)?;
    let alpha: Vec<QuadSurd> = b.alpha.iter().map(|a| QuadSurd::from_rational(a.clone())).collect();
    let th = cc.t_over_u.clone();
    let nth = &cc.nu_c * &th;
    let one = QuadSurd::one();
    let conv = |f: &[QuadSurd], g: &[QuadSurd], m: usize, lo: usize| -> QuadSurd {
        (lo..=m.saturating_sub(lo)).fold(QuadSurd::zero(), |acc, i| &acc + &(&f[i] * &g[m - i]))
    };
    let a1 = &alpha[1];
    Ok((0..=p_max)
        .map(|p| {
            let ap = &alpha[p];
            [
                &(&th * &alpha[p + 2]) / ap,
                nth.clone(),
                &(&(&th * &alpha[p + 1]) / ap) * &v.z1_at_uc,
                &nth * &(&v.z0_at_uc - &one),
                &(&th * &conv(&b.zeta, &alpha, p + 2, 1)) / ap,
                &(&nth * &conv(&b.xi, &alpha, p, 0)) / ap,
                &(&(&th * a1) * &r[p + 1]) / ap,
                &(&nth * &(&r[p] - &b.xi[p])) / ap,
            ]
        })
        .collect())
}

/// Normalized critical partition functions w_{p,q} = z_{p,q}(ν_c, t_c)u_c^{p+q},
/// each with an absolute error bound.
pub trait ZValues {
    fn w(&self, p: usize, q: usize) -> Result<(f64, f64)>;
}

impl ZValues for WGrid<f64> {
    fn w(&self, p: usize, q: usize) -> Result<(f64, f64)> {
        self.try_get(p, q)
            .or_else(|| self.try_get(q, p))
            .map(|&x| (x, 0.0))
            .ok_or_else(|| Error::OutOfRange(format!("w_{{{p},{q}}} outside the grid")))
    }
}

/// z-values summed from a truncated coefficient table at the critical point.
pub struct PartitionZ<'a> {
    pub table: &'a CoeffTable<f64>,
    pub tail: TailMode,
    nu: f64,
    t_c: f64,
    u_c: f64,
}

impl<'a> PartitionZ<'a> {
    pub fn new(table: &'a CoeffTable<f64>, tail: TailMode) -> Self {
        let cc = constants_critical();
        PartitionZ { table, tail, nu: cc.nu_c.to_f64(), t_c: cc.t_c(64).to_f64(), u_c: cc.u_c(64).to_f64() }
    }
}

impl ZValues for PartitionZ<'_> {
    fn w(&self, p: usize, q: usize) -> Result<(f64, f64)> {
        let v = eval_partition(self.table, p, q, self.nu, self.t_c, self.tail)?;
        let s = self.u_c.powi((p + q) as i32);
        Ok((v.value * s, v.truncation_error * s))
    }
}

/// Per-block weights of the finite-boundary law at boundary (p, q), q ≥ 1,
/// over any field: (family, k_lo, weights) and the terminal weight.
pub(crate) type FiniteWeights<F> = (Vec<(Family, u64, Vec<F>)>, F);

pub(crate) fn finite_weights<F: Field>(p: usize, q: usize, w: &dyn Fn(usize, usize) -> Result<F>) -> Result<FiniteWeights<F>> {
    if q == 0 {
        return Err(Error::Invalid("q = 0: the boundary is monochromatic and the peeling stops".into()));
    }
    let cc = constants_critical();
    let (nu, th, u2) = (F::from_surd(&cc.nu_c), F::from_surd(&cc.t_over_u), F::from_surd(&cc.u_c_squared()));
    let nth = nu.fmul(&th);
    let q1 = q - 1;
    let inv = w(p, q)?.finv();
    let pair = |s: &F, a: (usize, usize), b: (usize, usize)| -> Result<F> { Ok(s.fmul(&w(a.0, a.1)?).fmul(&w(b.0, b.1)?).fmul(&inv)) };
    let mut blocks = vec![
        (Family::Cp, 0, vec![th.fmul(&w(p + 2, q1)?).fmul(&inv)]),
        (Family::Cm, 0, vec![nth.fmul(&w(p, q1 + 2)?).fmul(&inv)]),
    ];
    // with q1 = 0 the vertex at distance 0 on the left is the one at distance
    // p on the right; the tie goes to the right-hand event
    if q1 > 0 {
        let half = q1 / 2;
        blocks.push((Family::Lp, 0, (0..=half).map(|k| pair(&th, (p + 1, q1 - k), (1, k))).collect::<Result<_>>()?));
        blocks.push((Family::Lm, 0, (0..=half).map(|k| pair(&nth, (p, q1 - k + 1), (0, k + 1))).collect::<Result<_>>()?));
    }
    blocks.push((Family::Rp, 0, (0..=p).map(|k| pair(&th, (k + 1, 0), (p - k + 1, q1))).collect::<Result<_>>()?));
    blocks.push((Family::Rm, 0, (0..=p).map(|k| pair(&nth, (k, 1), (p - k, q1 + 1))).collect::<Result<_>>()?));
    let jumps = q1.div_ceil(2); // 0 < j < q1/2
    if jumps > 1 {
        let pk = p as u64;
        blocks.push((Family::Rp, pk + 1, (1..jumps).map(|j| pair(&th, (p + 1, j), (1, q1 - j))).collect::<Result<_>>()?));
        blocks.push((Family::Rm, pk + 1, (1..jumps).map(|j| pair(&nth, (p, j + 1), (0, q1 - j + 1))).collect::<Result<_>>()?));
    }
    let terminal = match (p, q1) {
        (1, 0) => u2.fmul(&inv),
        (0, 1) => nu.fmul(&u2).fmul(&inv),
        _ => F::zero(),
    };
    Ok((blocks, terminal))
}

/// Exact total mass of the finite-boundary law from an exact grid (it is
/// one when the grid satisfies the recurrence).
pub fn finite_total_exact(p: usize, q: usize, grid: &WGrid<QuadSurd>) -> Result<QuadSurd> {
    let get = |a: usize, b: usize| -> Result<QuadSurd> {
        grid.try_get(a, b).or_else(|| grid.try_get(b, a)).cloned().ok_or_else(|| Error::OutOfRange(format!("w_{{{a},{b}}}")))
    };
    let (blocks, terminal) = finite_weights(p, q, &get)?;
    Ok(blocks.iter().flat_map(|(_, _, v)| v.iter()).fold(terminal, |acc, x| &acc + x))
}

/// Law of the first event for a finite boundary with p plus and q ≥ 1 minus
/// edges, from approximate z-values.
pub fn law_finite(p: usize, q: usize, z: &dyn ZValues) -> Result<EventLaw> {
    let mut err = 0.0f64;
    let w = |a: usize, b: usize| -> Result<f64> {
        let (v, _) = z.w(a, b)?;
        Ok(v)
    };
    let (raw, terminal) = finite_weights::<f64>(p, q, &w)?;
    // first-order propagation of the relative z-errors into the total
    let (den, den_err) = z.w(p, q)?;
    if den > 0.0 {
        err += den_err / den;
    }
    let mut blocks = Vec::with_capacity(raw.len());
    let mut weights = Vec::with_capacity(raw.len());
    for (family, k_lo, v) in raw {
        if v.iter().any(|x| x.is_nan() || *x < 0.0) {
            return Err(Error::Check(format!("negative weight in family {} at ({p}, {q})", family.name())));
        }
        let mass: f64 = v.iter().sum();
        let hi = k_lo + v.len() as u64 - 1;
        blocks.push(block(family, k_lo, Some(hi), mass, 1.0));
        weights.push(v);
    }
    let law = EventLaw::assemble(Regime::Finite { p: p as u64, q: q as u64 }, blocks, terminal, FINITE_TOLERANCE, None, Weights::Explicit(weights));
    if law.defect > FINITE_TOLERANCE {
        return Err(Error::Check(format!(
            "law at ({p}, {q}) has normalization defect {:.3e} (z-value error {err:.1e}); table too short",
            law.defect
        )));
    }
    Ok(law)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::boundary_series;

    fn tables() -> Arc<BoundaryTables> {
        BoundaryTables::shared().unwrap()
    }

    #[test]
    fn fullplane_exact_identities() {
        let m = fullplane_masses_exact().unwrap();
        let total = m.iter().fold(QuadSurd::zero(), |acc, (_, x)| &acc + x);
        assert_eq!(total, QuadSurd::one());
        let cm = &m[1].1;
        // 5(13√7 − 7)/252
        assert_eq!(cm, &QuadSurd::from_ints(-35, 252, 65, 252));
        assert!((cm.to_f64() - 0.543548).abs() < 2e-6);
        assert!((m[3].1.to_f64() - 0.214008).abs() < 1e-6);
        let nu = constants_critical().nu_c;
        assert_eq!(&m[4].1 * &nu, m[3].1);
        // X₁ + Y₁ = 1 only for the two C events
        assert_eq!(&m[0].1 + &m[1].1, &(&nu + &QuadSurd::one()) * &constants_critical().t_over_u);
    }

    #[test]
    fn fullplane_float_law_matches_exact() {
        let law = law_fullplane(&tables());
        let m = fullplane_masses_exact().unwrap();
        for ((f, x), (g, y)) in law.family_masses().iter().zip(&m) {
            assert_eq!(f, g);
            assert!((x - y.to_f64()).abs() < 1e-15);
        }
        // per-k weights add up to the family masses
        for (i, b) in law.blocks.iter().enumerate().skip(2) {
            let s: f64 = (0..200_000).map(|k| law.block_weight(i, k)).sum();
            assert!((s - b.mass) / b.mass < 1e-5 && s <= b.mass * (1.0 + 1e-12), "{:?}: {s} vs {}", b.family, b.mass);
        }
    }

    #[test]
    fn halfplane_exact_normalization() {
        let masses = halfplane_masses_exact(50).unwrap();
        for (p, m) in masses.iter().enumerate() {
            let total = m.iter().fold(QuadSurd::zero(), |acc, x| &acc + x);
            assert_eq!(total, QuadSurd::one(), "p = {p}");
            assert!(m.iter().all(|x| x.is_positive()));
        }
    }

    #[test]
    fn halfplane_float_law_matches_exact() {
        let masses = halfplane_masses_exact(30).unwrap();
        let t = tables();
        for p in [0, 1, 2, 7, 16, 17, 30] {
            let law = law_halfplane(p, &t);
            assert!(law.defect < 1e-12, "p = {p}: {:e}", law.defect);
            for (b, e) in law.blocks.iter().zip(&masses[p]) {
                assert!((b.mass - e.to_f64()).abs() < 1e-12, "p = {p} {:?}", b.family);
            }
            // the k ≤ p blocks are finite sums of tabulated weights
            for i in [4, 5] {
                let s: f64 = (0..=p as u64).map(|k| law.block_weight(i, k)).sum();
                assert!((s - law.blocks[i].mass).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn halfplane_large_p() {
        let t = tables();
        for p in [100, 1000, 10_000, 300_000] {
            let law = law_halfplane(p, &t);
            assert!(law.defect < 1e-9, "p = {p}: {:e}", law.defect);
        }
        // P(Rm(p)) decays like 1/p
        let sc: Vec<f64> = [1000usize, 3000, 10_000, 30_000].iter().map(|&p| p as f64 * law_halfplane(p, &t).weight(&PeelingEvent::Rm(p as u64))).collect();
        assert!((sc[0] / sc[2] - 1.0).abs() < 0.15, "{sc:?}");
        assert!(sc.windows(3).all(|w| (w[2] - w[1]).abs() < (w[1] - w[0]).abs()), "{sc:?}");
    }

    #[test]
    fn halfplane_tends_to_fullplane_for_small_k() {
        let t = tables();
        let far = law_halfplane(200_000, &t);
        let full = law_fullplane(&t);
        for e in [PeelingEvent::Cp, PeelingEvent::Lp(3), PeelingEvent::Rm(2), PeelingEvent::Rp(5)] {
            let (a, b) = (far.weight(&e), full.weight(&e));
            assert!(((a - b) / b).abs() < 1e-4, "{e}: {a} vs {b}");
        }
    }

    #[test]
    fn fullplane_tail_exponent() {
        let law = law_fullplane(&tables());
        // P(X₁ = −k) = P(Rp(k+1)) + P(Rm(k))
        let px = |k: u64| law.weight(&PeelingEvent::Rp(k + 1)) + law.weight(&PeelingEvent::Rm(k));
        let py = |k: u64| law.weight(&PeelingEvent::Lp(k - 1)) + law.weight(&PeelingEvent::Lm(k));
        let slope = |f: &dyn Fn(u64) -> f64, lo: u64, hi: u64| {
            let pts: Vec<(f64, f64)> = (lo..=hi).map(|k| ((k as f64).ln(), f(k).ln())).collect();
            let n = pts.len() as f64;
            let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
            pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>()
        };
        // the k^{-1/3} relative correction makes the fitted slope approach
        // -7/3 from below, slowly
        let mut last = f64::INFINITY;
        for (lo, hi) in [(10, 200), (20, 500), (100, 2000), (1000, 100_000)] {
            for f in [&px as &dyn Fn(u64) -> f64, &py] {
                let s = slope(f, lo, hi);
                assert!(s < -7.0 / 3.0 && s > -2.45, "[{lo}, {hi}]: {s}");
            }
            let dev = (slope(&px, lo, hi) + 7.0 / 3.0).abs();
            if lo > 20 {
                assert!(dev < last);
            }
            last = dev;
        }
        assert!(last < 0.03);
    }

    #[test]
    fn finite_law_is_normalized_exactly() {
        let b = boundary_series(30).unwrap();
        let g = WGrid::build(&b.zeta, &b.xi, 12, 12).unwrap();
        for (p, q) in [(0, 1), (1, 1), (0, 2), (2, 5), (3, 4), (4, 8), (0, 9)] {
            assert_eq!(finite_total_exact(p, q, &g).unwrap(), QuadSurd::one(), "({p}, {q})");
        }
    }

    #[test]
    fn finite_terminal_weight() {
        let b = boundary_series(12).unwrap();
        let g = WGrid::build(&b.zeta, &b.xi, 4, 4).unwrap();
        let f = |x: &QuadSurd| x.to_f64();
        let gf = WGrid::build(&b.zeta.iter().map(f).collect::<Vec<_>>(), &b.xi.iter().map(f).collect::<Vec<_>>(), 4, 4).unwrap();
        let law = law_finite(1, 1, &gf).unwrap();
        let u2 = constants_critical().u_c_squared();
        // 1/z_{1,1} = u_c²/w_{1,1}
        assert!((law.terminal - (&u2 / g.get(1, 1)).to_f64()).abs() < 1e-14);
        assert!(law.defect < 1e-13);
        assert!(law_finite(2, 0, &gf).is_err());
    }

    #[test]
    fn finite_law_approaches_halfplane() {
        let t = tables();
        let zeta: Vec<f64> = (0..260).map(|n| t.zeta(n)).collect();
        let xi: Vec<f64> = (0..260).map(|n| t.xi(n)).collect();
        let g = WGrid::build(&zeta, &xi, 250, 4).unwrap();
        let half = law_halfplane(2, &t);
        let mut last = f64::INFINITY;
        for q in [50, 100, 200] {
            let law = law_finite(2, q, &g).unwrap();
            let d: f64 = [PeelingEvent::Cp, PeelingEvent::Cm, PeelingEvent::Lp(1), PeelingEvent::Rm(2), PeelingEvent::Rp(0)]
                .iter()
                .map(|e| (law.weight(e) - half.weight(e)).abs())
                .fold(0.0, f64::max);
            assert!(d < last, "q = {q}: {d} not below {last}");
            last = d;
        }
        assert!(last < 0.01, "{last}");
    }
}

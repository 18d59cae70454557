use rand::Rng;
use serde::{Deserialize, Serialize};

use super::explore::{CriticalFiller, ExploredMap, FillMode};
use super::planar::{ColoredPlanarMap, FaceKind};
use crate::error::{Error, Result};
use crate::laws::{sample_event, Regime};
use crate::sim::LawProvider;

/// The ball of radius r: a rooted colored submap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    pub map: ColoredPlanarMap,
    pub radius: u32,
}

impl Ball {
    pub fn canonical_form(&self) -> Vec<u32> {
        self.map.canonical_form()
    }
}

/// [m]_r: the internal faces with a vertex at distance at most r − 1 from
/// the root vertex, with their spins and the boundary coloring. The ball of
/// radius 0 is the root vertex.
pub fn ball(m: &ColoredPlanarMap, r: u32) -> Ball {
    if r == 0 || m.root.is_none() {
        let mut v = ColoredPlanarMap::vertex_map();
        v.p = m.p;
        v.q = m.q;
        return Ball { map: v, radius: r };
    }
    let dist = m.vertex_distances();
    let mut keep = vec![false; m.faces.len()];
    for h in 0..m.twin.len() {
        let f = m.face[h] as usize;
        if matches!(m.faces[f], FaceKind::Internal(_)) && dist[m.origin[h] as usize] < r {
            keep[f] = true;
        }
    }
    let mut pre = m.clone();
    for (f, k) in pre.faces.iter_mut().enumerate() {
        if !keep[f] {
            *k = FaceKind::External;
        }
    }
    let kept_edge = |h: u32| keep[m.face[h as usize] as usize] || keep[m.face[m.twin[h as usize] as usize] as usize];
    let map = pre.without_edges(|h| !kept_edge(h), |_| FaceKind::External);
    Ball { map, radius: r }
}

/// 2^{−R} with R = sup{r : [m1]_r = [m2]_r}; 0 when all balls agree.
pub fn local_distance(m1: &ColoredPlanarMap, m2: &ColoredPlanarMap) -> f64 {
    let reach = |m: &ColoredPlanarMap| m.vertex_distances().into_iter().filter(|&d| d != u32::MAX).max().unwrap_or(0);
    // past this radius both balls are the whole root component
    let top = reach(m1).max(reach(m2)) + 2;
    for r in 1..=top {
        if ball(m1, r).canonical_form() != ball(m2, r).canonical_form() {
            return 0.5f64.powi(r as i32 - 1);
        }
    }
    0.0
}

/// A ball of the half-plane local limit together with the covering times.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HalfplaneBall {
    pub ball: Ball,
    /// θ_j for j = 0..=r.
    pub theta: Vec<u64>,
    /// Swallowed regions the filler could not cover.
    pub unfilled: usize,
    pub faces: usize,
}

/// Runs the half-plane peeling with algorithm 𝒜 and critical-Boltzmann
/// filling until θ_r, the first time every frontier vertex is at distance
/// at least r from ρ, and returns the ball of radius r.
///
/// The law of the ball is exact up to the filler, whose face budgets are
/// truncated to its table; regions above the table stay unexplored and are
/// counted in `unfilled`.
pub fn ball_sampler_halfplane<R: Rng + ?Sized>(
    p: u64,
    r: u32,
    laws: &LawProvider,
    filler: &CriticalFiller,
    guard: u64,
    rng: &mut R,
) -> Result<HalfplaneBall> {
    let mut e = ExploredMap::halfplane(p);
    let mut theta = vec![0u64];
    let mut d = e.frontier_distance();
    for j in 1..=r {
        while d < j {
            if e.steps() >= guard {
                return Err(Error::StepGuard(guard));
            }
            let Regime::Halfplane { p: pn } = e.regime() else { unreachable!() };
            let law = laws.law(&Regime::Halfplane { p: pn })?;
            let ev = sample_event(&law, rng)?.ok_or_else(|| Error::Check("terminal event in the half-plane".into()))?;
            e.apply_event(ev, FillMode::Critical(filler), rng)?;
            d = e.frontier_distance();
        }
        theta.push(e.steps());
    }
    let snap = e.snapshot();
    let b = ball(&snap, r);
    Ok(HalfplaneBall { faces: b.map.n_internal_faces(), ball: b, theta, unfilled: e.unfilled() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::map::sample_finite_map;
    use crate::map::Spin;
    use crate::tutte::build_evaluated_table;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample(seed: u64, n: usize) -> ColoredPlanarMap {
        let t = build_evaluated_table(n, 6, rat(2, 1)).unwrap();
        sample_finite_map(2, 2, n, &t, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn radius_zero_and_self_distance() {
        let m = sample(1, 20);
        assert_eq!(ball(&m, 0).map.n_edges(), 0);
        assert_eq!(local_distance(&m, &m), 0.0);
    }

    #[test]
    fn balls_nest() {
        for seed in 0..10 {
            let m = sample(seed, 30);
            for r in 0..5 {
                let big = ball(&m, r + 1);
                assert_eq!(ball(&big.map, r).canonical_form(), ball(&m, r).canonical_form(), "seed {seed} r {r}");
            }
        }
    }

    #[test]
    fn flipping_a_far_face_gives_distance_two_to_the_minus_three() {
        for seed in 0..40 {
            let m = sample(seed, 40);
            let dist = m.vertex_distances();
            let far = (0..m.faces.len()).find(|&f| {
                matches!(m.faces[f], FaceKind::Internal(_))
                    && (0..m.twin.len()).filter(|&h| m.face[h] as usize == f).map(|h| dist[m.origin[h] as usize]).min() == Some(3)
            });
            let Some(f) = far else { continue };
            let mut m2 = m.clone();
            if let FaceKind::Internal(s) = m2.faces[f] {
                m2.faces[f] = FaceKind::Internal(s.flip());
            }
            assert_eq!(local_distance(&m, &m2), 0.125);
            return;
        }
        panic!("no sample with a face at distance 3");
    }

    #[test]
    fn halfplane_ball_covering_times() {
        let laws = LawProvider::shared().unwrap();
        let filler = CriticalFiller::new(40, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let zero = ball_sampler_halfplane(0, 0, &laws, &filler, 10_000, &mut rng).unwrap();
        assert_eq!(zero.ball.map.n_edges(), 0);
        for _ in 0..20 {
            let b = ball_sampler_halfplane(1, 2, &laws, &filler, 100_000, &mut rng).unwrap();
            assert!(b.theta.windows(2).all(|w| w[0] <= w[1]), "{:?}", b.theta);
            assert!(b.faces > 0);
            assert!(b.ball.map.faces.iter().any(|k| matches!(k, FaceKind::Internal(Spin::Plus | Spin::Minus))));
        }
    }
}

use std::collections::VecDeque;

use rand::Rng;

use super::builder::{Builder, Geo};
use super::planar::{ColoredPlanarMap, FaceKind, Spin};
use super::sampler::fill_region;
use crate::error::{Error, Result};
use crate::laws::{displacement, PeelingEvent, Regime};
use crate::tutte::{build_critical_table, CoeffTable};

/// Face budgets for swallowed regions drawn from the critical Boltzmann
/// law truncated to the table: P(n) ∝ [tⁿ]z_{p,q}(ν_c)·t_cⁿ for n ≤ n_max.
/// Regions with a perimeter above the table are left unfilled.
pub struct CriticalFiller {
    table: CoeffTable<f64>,
}

impl CriticalFiller {
    pub fn new(n_max: usize, perim_top: usize) -> Result<Self> {
        Ok(CriticalFiller { table: build_critical_table(n_max, perim_top)? })
    }

    pub fn table(&self) -> &CoeffTable<f64> {
        &self.table
    }

    pub fn covers(&self, p: usize, q: usize) -> bool {
        p + q <= self.table.perim_top
    }

    /// Unnormalized budget weights over n = 0..=n_max, or None when the
    /// region is above the table.
    pub fn budget_weights(&self, p: usize, q: usize) -> Option<Vec<f64>> {
        if !self.covers(p, q) {
            return None;
        }
        Some((0..=self.table.n_max).map(|n| self.table.get(p, q, n)).collect())
    }

    fn draw<R: Rng + ?Sized>(&self, p: usize, q: usize, rng: &mut R) -> Option<usize> {
        let w = self.budget_weights(p, q)?;
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return None;
        }
        let mut u = rng.random::<f64>() * total;
        for (n, x) in w.iter().enumerate() {
            if u < *x {
                return Some(n);
            }
            u -= x;
        }
        w.iter().rposition(|&x| x > 0.0)
    }
}

/// What to do with a region swallowed by a peeling step.
#[derive(Clone, Copy)]
pub enum FillMode<'a> {
    /// Leave it as an [`FaceKind::Unexplored`] face.
    Mark,
    Critical(&'a CriticalFiller),
}

/// The closing edge of a half-plane window: it stands for the infinite
/// rest of the − boundary on both sides.
#[derive(Clone, Copy, Debug)]
struct Window {
    /// Hole side from the right end of the window to its left end.
    d: u32,
    /// Its twin on the external face.
    x: u32,
    /// External half-edge preceding x.
    x_prev: u32,
}

/// Explored map e_n of a peeling exploration along the leftmost interface.
///
/// The hole is kept as its list of sides, rotated so that the first side
/// leaves ρ_n and the last one is the − edge that gets peeled. In the
/// half-plane regime the boundary is materialized lazily around a window.
#[derive(Clone)]
pub struct ExploredMap {
    b: Builder,
    hole: Vec<u32>,
    window: Option<Window>,
    root: u32,
    p0: u64,
    q0: Option<u64>,
    x: i64,
    y: i64,
    materialized: u64,
    steps: u64,
    unfilled: usize,
    terminated: bool,
}

/// Outcome of one [`ExploredMap::apply_event`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepReport {
    /// (p, q) of the swallowed region, if any.
    pub swallowed: Option<(usize, usize)>,
    /// Whether the swallowed region was filled.
    pub filled: bool,
    /// Faces added by the filler.
    pub filled_faces: usize,
}

impl ExploredMap {
    /// e₀ of a finite (p, q) boundary, q ≥ 1.
    pub fn finite(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Invalid("the boundary needs a − edge".into()));
        }
        let mut b = Builder::new();
        let (hole, root) = b.polygon(p as usize, q as usize);
        Ok(Self::from_parts(b, hole, None, root, p, Some(q)))
    }

    /// e₀ of the half-plane with boundary condition +^p −^∞.
    pub fn halfplane(p: u64) -> Self {
        let mut b = Builder::new();
        // window +^p, one − edge on each side, and the closing edge
        let (sides, root) = b.polygon(p as usize, 3);
        let d = sides[p as usize + 1];
        let x = b.twin[d as usize];
        let x_prev = b.twin[sides[p as usize + 2] as usize];
        let mut m = Self::from_parts(b, sides, Some(Window { d, x, x_prev }), root, p, None);
        m.materialized = 2;
        m
    }

    fn from_parts(b: Builder, hole: Vec<u32>, window: Option<Window>, root: u32, p: u64, q: Option<u64>) -> Self {
        ExploredMap {
            b,
            hole,
            window,
            root,
            p0: p,
            q0: q,
            x: 0,
            y: 0,
            materialized: 0,
            steps: 0,
            unfilled: 0,
            terminated: false,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// Number of swallowed regions left unfilled so far.
    pub fn unfilled(&self) -> usize {
        self.unfilled
    }

    /// (X_n, Y_n) summed from the event displacements.
    pub fn displacement(&self) -> (i64, i64) {
        (self.x, self.y)
    }

    fn is_virtual(&self, h: u32) -> bool {
        self.window.is_some_and(|w| w.d == h)
    }

    /// Frontier counts (P_n, Q_n) read off the hole, Q_n being None in the
    /// half-plane.
    pub fn counts(&self) -> (u64, Option<u64>) {
        let plus = self.hole.iter().filter(|&&h| self.b.outside_spin(h) == Spin::Plus).count() as u64;
        let minus = self.hole.len() as u64 - plus;
        (plus, if self.window.is_some() { None } else { Some(minus) })
    }

    /// Y_n measured on the frontier: explicit − sides minus the boundary
    /// edges pulled in from the implicit part (half-plane), or Q_n − q.
    pub fn frontier_y(&self) -> i64 {
        let explicit = self.hole.iter().filter(|&&h| !self.is_virtual(h) && self.b.outside_spin(h) == Spin::Minus).count() as i64;
        match self.q0 {
            Some(q) => explicit - q as i64,
            None => explicit - self.materialized as i64,
        }
    }

    pub fn regime(&self) -> Regime {
        let (p, q) = self.counts();
        match q {
            Some(q) => Regime::Finite { p, q },
            None => Regime::Halfplane { p },
        }
    }

    /// Distances in e_n from the root vertex, the closing edge excluded.
    fn distances(&self) -> Vec<u32> {
        let b = &self.b;
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); b.n_vertices as usize];
        for h in 0..b.twin.len() as u32 {
            if b.dead[h as usize] || self.is_virtual(h) || self.window.is_some_and(|w| w.x == h) {
                continue;
            }
            adj[b.origin[h as usize] as usize].push(b.dest(h));
        }
        let mut dist = vec![u32::MAX; b.n_vertices as usize];
        let mut queue = VecDeque::from([0u32]);
        dist[0] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// d_{e_n}(ρ, ∂e_n). Vertices beyond a half-plane window are farther
    /// than its ends.
    pub fn frontier_distance(&self) -> u32 {
        let dist = self.distances();
        self.hole.iter().map(|&h| dist[self.b.origin[h as usize] as usize]).min().unwrap_or(u32::MAX)
    }

    fn grow_right(&mut self) {
        let w = self.window.as_mut().expect("window");
        let b = &mut self.b;
        let r_end = b.origin[w.d as usize];
        let v = b.new_vertex();
        let (n_in, n_ext) = b.new_pair(r_end, v);
        b.face[n_ext as usize] = 0;
        b.side_spin[n_ext as usize] = Some(Spin::Minus);
        b.origin[w.d as usize] = v;
        b.next[n_ext as usize] = b.next[w.x as usize];
        b.next[w.x as usize] = n_ext;
        let i = self.hole.iter().position(|&h| h == w.d).unwrap();
        self.hole.insert(i, n_in);
        self.materialized += 1;
    }

    fn grow_left(&mut self) {
        let w = self.window.as_mut().expect("window");
        let b = &mut self.b;
        let l_end = b.origin[w.x as usize];
        let v = b.new_vertex();
        let (n_in, n_ext) = b.new_pair(v, l_end);
        b.face[n_ext as usize] = 0;
        b.side_spin[n_ext as usize] = Some(Spin::Minus);
        b.origin[w.x as usize] = v;
        b.next[w.x_prev as usize] = n_ext;
        b.next[n_ext as usize] = w.x;
        w.x_prev = n_ext;
        let i = self.hole.iter().position(|&h| h == w.d).unwrap();
        self.hole.insert(i + 1, n_in);
        self.materialized += 1;
    }

    /// Rotates the hole to ρ_n: the switch from − to + on the frontier, or
    /// on a monochromatic − frontier the leftmost vertex nearest to ρ
    /// (algorithm 𝒜). Leftmost means first in the frontier order starting
    /// after the window's closing edge, or from the previous ρ_n on a finite
    /// boundary.
    fn rotate_to_peel_site(&mut self) {
        let (np, _) = self.b.rotate_to_root(&mut self.hole);
        if np == 0 {
            if let Some(w) = self.window {
                let i = self.hole.iter().position(|&h| h == w.d).unwrap();
                self.hole.rotate_left(i + 1);
            }
            let dist = self.distances();
            let best = (0..self.hole.len())
                .min_by_key(|&i| (dist[self.b.origin[self.hole[i] as usize] as usize], i))
                .unwrap();
            self.hole.rotate_left(best);
        }
        if self.is_virtual(*self.hole.last().unwrap()) {
            self.grow_left();
        }
    }

    /// Applies one peeling event. A swallowed region is filled according to
    /// `fill` or left as an unexplored face.
    pub fn apply_event<R: Rng + ?Sized>(&mut self, e: PeelingEvent, fill: FillMode<'_>, rng: &mut R) -> Result<StepReport> {
        if self.terminated {
            return Err(Error::Invalid("exploration already terminated".into()));
        }
        let regime = self.regime();
        let disp = displacement(&e, &regime)?;
        self.rotate_to_peel_site();
        let (geo, spin) = match e {
            PeelingEvent::Cp => (Geo::C, Spin::Plus),
            PeelingEvent::Cm => (Geo::C, Spin::Minus),
            PeelingEvent::Lp(k) => (Geo::L(k as usize), Spin::Plus),
            PeelingEvent::Lm(k) => (Geo::L(k as usize), Spin::Minus),
            PeelingEvent::Rp(k) => (Geo::R(k as usize), Spin::Plus),
            PeelingEvent::Rm(k) => (Geo::R(k as usize), Spin::Minus),
        };
        if let Some(w) = self.window {
            match geo {
                Geo::R(k) => {
                    while self.hole.iter().position(|&h| h == w.d).unwrap() < k {
                        self.grow_right();
                    }
                }
                Geo::L(k) => {
                    // sides after the closing edge, the peeled one included
                    while self.hole.len() - 1 - self.hole.iter().position(|&h| h == w.d).unwrap() < k + 1 {
                        self.grow_left();
                    }
                }
                _ => {}
            }
        }
        let mut regions = self.b.reveal(&self.hole, geo, spin);
        let kept = regions.pop().unwrap();
        let mut report = StepReport { swallowed: None, filled: false, filled_faces: 0 };
        if let Some(mut sw) = regions.pop() {
            let (np, nm) = self.b.rotate_to_root(&mut sw);
            report.swallowed = Some((np, nm));
            let before = self.b.faces.len();
            let budget = match fill {
                FillMode::Critical(f) => f.draw(np, nm, rng).map(|n| (f, n)),
                FillMode::Mark => None,
            };
            match budget {
                Some((f, n)) => {
                    fill_region(&mut self.b, sw, n, f.table(), rng)?;
                    report.filled = true;
                    report.filled_faces = self.b.faces.len() - before;
                }
                None => {
                    self.b.close(&sw, FaceKind::Unexplored);
                    self.unfilled += 1;
                }
            }
        }
        self.hole = kept;
        self.x += disp.dx;
        self.y += disp.dy;
        self.steps += 1;
        let (p_now, q_now) = self.counts();
        let consistent = p_now as i64 == self.p0 as i64 + self.x
            && self.frontier_y() == self.y
            && q_now.is_none_or(|q| q as i64 == self.q0.unwrap() as i64 + self.y);
        if !consistent {
            return Err(Error::Check(format!("frontier ({p_now},{q_now:?}) disagrees with displacement sum ({},{})", self.x, self.y)));
        }
        if q_now == Some(0) {
            self.terminated = true;
        }
        Ok(report)
    }

    /// Closes a finite exploration whose hole is an edge map ((1,1) or (0,2)).
    pub fn close_terminal(&mut self) -> Result<()> {
        let (p, q) = self.counts();
        if self.terminated || q.is_none() || p + q.unwrap() != 2 || q == Some(0) {
            return Err(Error::Invalid(format!("hole ({p},{q:?}) is not an edge map")));
        }
        let h = std::mem::take(&mut self.hole);
        self.b.glue(&h);
        self.terminated = true;
        Ok(())
    }

    /// The explored map as a planar map; the hole becomes a [`FaceKind::Hole`]
    /// face, merged with the external face in the half-plane.
    pub fn snapshot(&self) -> ColoredPlanarMap {
        let mut b = self.b.clone();
        if !self.hole.is_empty() {
            b.close(&self.hole, FaceKind::Hole);
        }
        let p = self.p0 as usize;
        let q = self.q0.unwrap_or(0) as usize;
        let m = b.finish(self.root, 0, p, q);
        match self.window {
            None => m,
            Some(w) => {
                // half-edge ids shift by the dead ones before d
                let dead_before = |h: u32| self.b.dead[..h as usize].iter().filter(|&&x| x).count() as u32;
                let (d, x) = (w.d - dead_before(w.d), w.x - dead_before(w.x));
                m.without_edges(|h| h == d || h == x, |_| FaceKind::Hole)
            }
        }
    }
}

/// The truncated map e°: e_n without the boundary edges that lie between
/// the hole and the external face.
pub fn truncate_map(m: &ColoredPlanarMap) -> ColoredPlanarMap {
    let between = |h: u32| {
        let (a, b) = (m.kind_of(h), m.kind_of(m.twin[h as usize]));
        matches!((a, b), (FaceKind::Hole, FaceKind::External) | (FaceKind::External, FaceKind::Hole))
    };
    m.without_edges(between, |ks| {
        if ks.contains(&FaceKind::Hole) {
            FaceKind::Hole
        } else {
            FaceKind::External
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::planar::{validate_map, Expected};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn table_rows_on_a_finite_boundary() {
        let mut r = rng();
        let mut m = ExploredMap::finite(3, 4).unwrap();
        m.apply_event(PeelingEvent::Cp, FillMode::Mark, &mut r).unwrap();
        assert_eq!(m.counts(), (5, Some(3)));
        assert_eq!(m.snapshot().n_internal_faces(), 1);

        let mut m = ExploredMap::finite(3, 5).unwrap();
        let rep = m.apply_event(PeelingEvent::Lp(2), FillMode::Mark, &mut r).unwrap();
        assert_eq!(m.counts(), (4, Some(2)));
        assert_eq!(rep.swallowed, Some((1, 2)));

        // R−₀ keeps (P, Q) and encloses a loop, which holds at least one face
        let mut m = ExploredMap::finite(3, 5).unwrap();
        let rep = m.apply_event(PeelingEvent::Rm(0), FillMode::Mark, &mut r).unwrap();
        assert_eq!(m.counts(), (3, Some(5)));
        assert_eq!(rep.swallowed, Some((0, 1)));
        assert!(m.apply_event(PeelingEvent::Lp(3), FillMode::Mark, &mut r).is_err());
    }

    #[test]
    fn truncation() {
        let m = ExploredMap::finite(2, 3).unwrap();
        let t = truncate_map(&m.snapshot());
        assert_eq!(t.n_edges(), 0);
        let mut m = ExploredMap::finite(2, 3).unwrap();
        m.apply_event(PeelingEvent::Cp, FillMode::Mark, &mut rng()).unwrap();
        let t = truncate_map(&m.snapshot());
        assert_eq!((t.n_internal_faces(), t.n_edges()), (1, 3));
        assert_eq!(truncate_map(&t), t);
    }

    #[test]
    fn halfplane_window_grows_on_demand() {
        let mut r = rng();
        let mut m = ExploredMap::halfplane(2);
        assert_eq!(m.counts(), (2, None));
        m.apply_event(PeelingEvent::Rp(6), FillMode::Mark, &mut r).unwrap();
        assert_eq!(m.counts(), (1, None));
        assert_eq!(m.displacement(), (-1, -5));
        m.apply_event(PeelingEvent::Lm(5), FillMode::Mark, &mut r).unwrap();
        assert_eq!(m.displacement(), (-1, -10));
        let s = m.snapshot();
        assert_eq!(s.n_internal_faces(), 2);
        assert_eq!(s.faces.iter().filter(|k| **k == FaceKind::Unexplored).count(), 2);
    }

    #[test]
    fn filled_finite_exploration_is_a_triangulation() {
        let f = CriticalFiller::new(30, 12).unwrap();
        let mut r = rng();
        let mut m = ExploredMap::finite(1, 2).unwrap();
        // (1,2): Rp(1) swallows a (2,0)-gon and leaves (1,1); then close
        m.apply_event(PeelingEvent::Rp(1), FillMode::Critical(&f), &mut r).unwrap();
        assert_eq!(m.counts(), (1, Some(1)));
        m.close_terminal().unwrap();
        let s = m.snapshot();
        let rep = validate_map(&s, 2.0, &Expected { p: Some(1), q: Some(2), ..Default::default() });
        assert!(rep.ok(), "{rep}");
    }

    #[test]
    fn replayed_paths_match_frontier_counts() {
        use crate::sim::{run_path, LawProvider, RunOptions, StoppingSpec};
        let laws = LawProvider::shared().unwrap().with_finite_grid(40, 20).unwrap();
        let rec = RunOptions { record: true, ..Default::default() };
        let mut r = rng();
        for (init, steps) in [(Regime::Halfplane { p: 4 }, 400), (Regime::Finite { p: 6, q: 7 }, 200)] {
            for _ in 0..5 {
                let (_, path) = run_path(init, &StoppingSpec::FixedSteps(steps), &laws, &mut r, &rec).unwrap();
                let path = path.unwrap();
                let mut m = match init {
                    Regime::Halfplane { p } => ExploredMap::halfplane(p),
                    Regime::Finite { p, q } => ExploredMap::finite(p, q).unwrap(),
                    Regime::Fullplane => unreachable!(),
                };
                for (i, &e) in path.events.iter().enumerate() {
                    m.apply_event(e, FillMode::Mark, &mut r).unwrap();
                    let (x, y) = (path.x[i + 1], path.y[i + 1]);
                    assert_eq!(m.displacement(), (x, y));
                    assert_eq!(m.frontier_y(), y);
                    let (p, q) = m.counts();
                    assert_eq!(p as i64, init.p().unwrap() as i64 + x);
                    if let Regime::Finite { q: q0, .. } = init {
                        assert_eq!(q, Some((q0 as i64 + y) as u64));
                    }
                }
            }
        }
    }
}

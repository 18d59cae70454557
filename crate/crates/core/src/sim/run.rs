use super::rng::RngStream;
use super::stopping::{StopReason, StoppingSpec};
use crate::critical::WGrid;
use crate::error::{Error, Result};
use crate::laws::{displacement, law_finite, law_fullplane, law_halfplane, sample_event, BoundaryTables, EventLaw, PeelingEvent, Regime};
use crate::par;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::borrow::Cow;
use std::sync::Arc;

pub const DEFAULT_STEP_GUARD: u64 = 100_000_000;

/// Supplies the law of the next event for each regime state.
pub struct LawProvider {
    tables: Arc<BoundaryTables>,
    full: EventLaw,
    finite: Option<WGrid<f64>>,
    mu: f64,
}

impl LawProvider {
    pub fn new(tables: Arc<BoundaryTables>) -> Self {
        let full = law_fullplane(&tables);
        LawProvider { tables, full, finite: None, mu: crate::algebra::constants_critical().mu() }
    }

    pub fn shared() -> Result<Self> {
        Ok(LawProvider::new(BoundaryTables::shared()?))
    }

    /// Adds a grid of w_{p,q} for finite-boundary laws, covering boundaries
    /// with min(p, q) + 2 ≤ `min_side` and p + q + 2 ≤ `perimeter`. The grid
    /// recursion is only accurate for a small `min_side` (about 20).
    pub fn with_finite_grid(mut self, perimeter: usize, min_side: usize) -> Result<Self> {
        let need = perimeter + min_side + 2;
        let zeta: Vec<f64> = (0..need).map(|n| self.tables.zeta(n)).collect();
        let xi: Vec<f64> = (0..need).map(|n| self.tables.xi(n)).collect();
        self.finite = Some(WGrid::build(&zeta, &xi, perimeter, min_side)?);
        Ok(self)
    }

    pub fn tables(&self) -> &Arc<BoundaryTables> {
        &self.tables
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn law(&self, r: &Regime) -> Result<Cow<'_, EventLaw>> {
        match *r {
            Regime::Fullplane => Ok(Cow::Borrowed(&self.full)),
            Regime::Halfplane { p } => Ok(Cow::Owned(law_halfplane(p as usize, &self.tables))),
            Regime::Finite { p, q } => {
                let g = self.finite.as_ref().ok_or_else(|| Error::Invalid("no finite-boundary grid configured".into()))?;
                Ok(Cow::Owned(law_finite(p as usize, q as usize, g)?))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Keep the full event sequence and (x, y) trajectory.
    pub record: bool,
    pub guard: u64,
    /// Step counts at which to record sup_{k≤n} max(|X_k − μk|, |Y_k − μk|).
    pub checkpoints: Vec<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { record: false, guard: DEFAULT_STEP_GUARD, checkpoints: Vec::new() }
    }
}

/// Full record of a path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerimeterPath {
    pub initial: Regime,
    pub events: Vec<PeelingEvent>,
    pub x: Vec<i64>,
    pub y: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub path_id: u64,
    pub stop_reason: StopReason,
    pub stop_time: u64,
    pub x_final: i64,
    pub y_final: i64,
    pub min_x: i64,
    pub min_y: i64,
    /// (checkpoint, running sup deviation) for the checkpoints reached.
    pub sup_dev: Vec<(u64, f64)>,
    /// Steps with both increments below −2.
    pub simultaneous_jumps: u64,
}

fn current(init: &Regime, x: i64, y: i64) -> Result<Regime> {
    Ok(match *init {
        Regime::Fullplane => Regime::Fullplane,
        Regime::Halfplane { p } => {
            let pn = p as i64 + x;
            if pn < 0 {
                return Err(Error::Check(format!("negative perimeter {pn}")));
            }
            Regime::Halfplane { p: pn as u64 }
        }
        Regime::Finite { p, q } => {
            let (pn, qn) = (p as i64 + x, q as i64 + y);
            if pn < 0 || qn < 0 {
                return Err(Error::Check(format!("negative perimeter ({pn}, {qn})")));
            }
            Regime::Finite { p: pn as u64, q: qn as u64 }
        }
    })
}

/// Runs one perimeter path from `init` until `stopping` fires.
pub fn run_path<R: Rng + ?Sized>(
    init: Regime,
    stopping: &StoppingSpec,
    laws: &LawProvider,
    rng: &mut R,
    opts: &RunOptions,
) -> Result<(PathSummary, Option<PerimeterPath>)> {
    stopping.validate()?;
    if stopping.uses_cover_radius() {
        return Err(Error::Invalid("θ_r needs the map explorer (map::ball_sampler_halfplane)".into()));
    }
    if init == Regime::Fullplane && !stopping.finite_without_p() {
        return Err(Error::Invalid("T_m never fires in the full plane".into()));
    }
    let mu = laws.mu();
    let (mut x, mut y, mut n) = (0i64, 0i64, 0u64);
    let (mut min_x, mut min_y) = (0i64, 0i64);
    let mut sup = 0.0f64;
    let mut sup_dev = Vec::new();
    let mut cps = opts.checkpoints.clone();
    cps.sort_unstable();
    let mut next_cp = cps.iter().peekable();
    let mut simultaneous = 0u64;
    let mut path = opts.record.then(|| PerimeterPath { initial: init, events: Vec::new(), x: vec![0], y: vec![0] });
    let reason = loop {
        let state = current(&init, x, y)?;
        while next_cp.peek().is_some_and(|&&c| c <= n) {
            let c = *next_cp.next().unwrap();
            if c == n {
                sup_dev.push((c, sup));
            }
        }
        if let Some(r) = stopping.check(n, state.p().map(|p| p as i64), x, y, mu) {
            break r;
        }
        if let Regime::Finite { q: 0, .. } = state {
            break StopReason::MonochromaticPlus;
        }
        if n >= opts.guard {
            return Err(Error::StepGuard(opts.guard));
        }
        let law = laws.law(&state)?;
        let Some(e) = sample_event(&law, rng)? else {
            break StopReason::EdgeMap;
        };
        let d = displacement(&e, &state)?;
        if d.dx < -2 && d.dy < -2 {
            simultaneous += 1;
        }
        x += d.dx;
        y += d.dy;
        n += 1;
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        let m = mu * n as f64;
        sup = sup.max((x as f64 - m).abs()).max((y as f64 - m).abs());
        if let Some(p) = path.as_mut() {
            p.events.push(e);
            p.x.push(x);
            p.y.push(y);
        }
    };
    let summary = PathSummary {
        path_id: 0,
        stop_reason: reason,
        stop_time: n,
        x_final: x,
        y_final: y,
        min_x,
        min_y,
        sup_dev,
        simultaneous_jumps: simultaneous,
    };
    Ok((summary, path))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchConfig {
    pub init: Regime,
    pub stopping: StoppingSpec,
    pub options: RunOptions,
}

/// Runs `n_paths` independent paths; path i draws from stream i of `seed`.
pub fn batch_run(config: &BatchConfig, laws: &LawProvider, n_paths: u64, seed: u64) -> Result<Vec<PathSummary>> {
    if n_paths == 0 {
        return Err(Error::Invalid("n_paths must be at least 1".into()));
    }
    let opts = RunOptions { record: false, ..config.options.clone() };
    let runs = par::map_range(n_paths as usize, |i| {
        let mut rng = RngStream::new(seed, i as u64).rng();
        run_path(config.init, &config.stopping, laws, &mut rng, &opts).map(|(mut s, _)| {
            s.path_id = i as u64;
            s
        })
    });
    runs.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn provider() -> LawProvider {
        LawProvider::shared().unwrap()
    }

    #[test]
    fn zero_steps_and_consistency() {
        let laws = provider();
        let mut rng = RngStream::new(1, 0).rng();
        let rec = RunOptions { record: true, ..Default::default() };
        let (s, p) = run_path(Regime::Fullplane, &StoppingSpec::FixedSteps(0), &laws, &mut rng, &rec).unwrap();
        assert_eq!(s.stop_time, 0);
        assert!(p.unwrap().events.is_empty());
        let (s, p) = run_path(Regime::Halfplane { p: 30 }, &StoppingSpec::FixedSteps(2000), &laws, &mut rng, &rec).unwrap();
        let p = p.unwrap();
        assert_eq!(s.stop_time, 2000);
        for i in 0..p.events.len() {
            let state = Regime::Halfplane { p: (30 + p.x[i]) as u64 };
            let d = displacement(&p.events[i], &state).unwrap();
            assert_eq!((p.x[i + 1] - p.x[i], p.y[i + 1] - p.y[i]), (d.dx, d.dy));
            assert!(30 + p.x[i + 1] >= 0);
        }
    }

    #[test]
    fn batch_matches_single_runs() {
        let laws = provider();
        let cfg = BatchConfig { init: Regime::Halfplane { p: 50 }, stopping: StoppingSpec::HitLevel(5), options: RunOptions::default() };
        let a = batch_run(&cfg, &laws, 3, 42).unwrap();
        let b = batch_run(&cfg, &laws, 3, 42).unwrap();
        assert_eq!(a, b);
        let (single, _) = run_path(cfg.init, &cfg.stopping, &laws, &mut RngStream::new(42, 0).rng(), &RunOptions::default()).unwrap();
        assert_eq!(single, a[0]);
        assert!(a.iter().all(|s| s.stop_reason == StopReason::HitLevel(5)));
    }

    #[test]
    fn fullplane_never_hits_level() {
        let laws = provider();
        let r = run_path(Regime::Fullplane, &StoppingSpec::HitLevel(3), &laws, &mut RngStream::new(0, 0).rng(), &RunOptions::default());
        assert!(r.is_err());
        let guard = RunOptions { guard: 10, ..Default::default() };
        let r = run_path(Regime::Halfplane { p: 1000 }, &StoppingSpec::HitLevel(0), &laws, &mut RngStream::new(0, 0).rng(), &guard);
        assert!(matches!(r, Err(Error::StepGuard(10))));
    }

    #[test]
    fn finite_runs_terminate_or_leave_the_grid() {
        let laws = provider().with_finite_grid(80, 16).unwrap();
        let mut ends = 0;
        for i in 0..200 {
            let mut rng = RngStream::new(9, i).rng();
            match run_path(Regime::Finite { p: 1, q: 2 }, &StoppingSpec::FixedSteps(10_000), &laws, &mut rng, &RunOptions::default()) {
                Ok((s, _)) => {
                    assert!(matches!(s.stop_reason, StopReason::EdgeMap | StopReason::MonochromaticPlus), "{s:?}");
                    ends += 1;
                }
                Err(e) => assert!(matches!(e, Error::OutOfRange(_)), "{e}"),
            }
        }
        assert!(ends > 100, "{ends}");
    }
}

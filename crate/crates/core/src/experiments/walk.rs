use super::config::{ExperimentConfig, Params};
use super::report::{PassRule, Provenance, StatResult};
use super::stats::{least_squares, median, proportion_ci, z_level, Moments};
use crate::error::{Error, Result};
use crate::laws::{displacement, sample_event, Regime};
use crate::par;
use crate::sim::{barrier_f, run_path, LawProvider, RngStream, RunOptions, StopReason, StoppingSpec, DEFAULT_STEP_GUARD};

/// The i.i.d. draws of the drift experiment are split into this many
/// streams, whatever the thread count.
pub const DRIFT_STREAMS: u64 = 64;

pub(crate) fn need_seed(cfg: &ExperimentConfig) -> Result<u64> {
    cfg.seed.ok_or_else(|| Error::Invalid("this experiment needs a seed".into()))
}

fn finish(results: Vec<StatResult>, par: &Params, seed: Option<u64>) -> Vec<StatResult> {
    results.into_iter().map(|r| r.params(&par.0, seed)).collect()
}

/// E[X₁], E[Y₁] and E[X₁ + Y₁] from i.i.d. full-plane events.
///
/// X₁ and Y₁ have infinite variance, so the normal interval built from the
/// sample variance is only indicative.
pub fn exp_drift(cfg: &ExperimentConfig, laws: &LawProvider) -> Result<Vec<StatResult>> {
    const NAME: &str = "drift";
    let seed = need_seed(cfg)?;
    let mut par = Params::default();
    let n = par.count("n_steps", cfg.n_steps, 10_000_000)?;
    let law = laws.law(&Regime::Fullplane)?;
    let streams = DRIFT_STREAMS.min(n);
    let parts = par::map_range(streams as usize, |i| -> Result<[Moments; 3]> {
        let len = n / streams + u64::from((i as u64) < n % streams);
        let mut rng = RngStream::new(seed, i as u64).rng();
        let mut m = [Moments::default(); 3];
        for _ in 0..len {
            let e = sample_event(&law, &mut rng)?.ok_or_else(|| Error::Check("terminal event in the full plane".into()))?;
            let d = displacement(&e, &Regime::Fullplane)?;
            m[0].push(d.dx as f64);
            m[1].push(d.dy as f64);
            m[2].push((d.dx + d.dy) as f64);
        }
        Ok(m)
    });
    let mut tot = [Moments::default(); 3];
    for part in parts {
        let part = part?;
        for (t, p) in tot.iter_mut().zip(&part) {
            t.merge(p);
        }
    }
    let mu = laws.mu();
    let out = [("mean_x", mu), ("mean_y", mu), ("mean_sum", 2.0 * mu)]
        .iter()
        .zip(&tot)
        .map(|(&(stat, target), m)| {
            let (lo, hi) = m.ci();
            StatResult::new(NAME, stat, m.mean())
                .ci(lo, hi)
                .target(target, Provenance::Published)
                .judge(PassRule::TargetInCi, None)
                .diag("sample_variance", m.variance())
        })
        .collect();
    Ok(finish(out, &par, Some(seed)))
}

/// sup_t |S(t) − F(t)| over [0, t_max] between the empirical survival
/// function S(t) = #{T > t}/N of the (possibly censored) times and F.
/// Censored entries (None) survive past t_max.
pub fn survival_sup_distance(times: &[Option<f64>], t_max: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = times.len() as f64;
    let mut hits: Vec<f64> = times.iter().filter_map(|&t| t).filter(|&t| t <= t_max).collect();
    hits.sort_by(f64::total_cmp);
    let total = times.len();
    // S is constant between jumps and F is monotone, so checking both sides
    // of every jump and the two ends is enough
    let mut below = 0usize; // entries ≤ current t
    let mut sup = (1.0 - f(0.0)).abs();
    let mut i = 0;
    while i < hits.len() {
        let t = hits[i];
        let left = (total - below) as f64 / n;
        while i < hits.len() && hits[i] == t {
            i += 1;
        }
        below = i;
        let right = (total - below) as f64 / n;
        sup = sup.max((left - f(t)).abs()).max((right - f(t)).abs());
    }
    sup.max(((total - below) as f64 / n - f(t_max)).abs())
}

/// Survival of T_m/p against (1 + μt)^{−4/3}.
pub fn exp_tm_law(cfg: &ExperimentConfig, laws: &LawProvider) -> Result<Vec<StatResult>> {
    const NAME: &str = "tm_law";
    let seed = need_seed(cfg)?;
    let mut par = Params::default();
    let p = par.count("p", cfg.p, 2000)?;
    let m = cfg.m.unwrap_or(5);
    par.set("m", m as f64);
    let n_paths = par.count("n_paths", cfg.n_paths, 10_000)?;
    let t_max = par.positive("t_max", cfg.t_max, 10.0)?;
    let tol = par.positive("tolerance", cfg.tolerance, 0.03)?;
    let guard = par.count("guard", cfg.guard, DEFAULT_STEP_GUARD)?;
    if m >= p {
        return Err(Error::Invalid(format!("m = {m} must be below p = {p}")));
    }
    let cap = (t_max * p as f64).ceil() as u64;
    let stop = StoppingSpec::FirstOf(vec![StoppingSpec::HitLevel(m), StoppingSpec::FixedSteps(cap)]);
    let opts = RunOptions { guard, ..Default::default() };
    let runs = par::map_range(n_paths as usize, |i| {
        let mut rng = RngStream::new(seed, i as u64).rng();
        run_path(Regime::Halfplane { p }, &stop, laws, &mut rng, &opts)
            .map(|(s, _)| matches!(s.stop_reason, StopReason::HitLevel(_)).then_some(s.stop_time as f64 / p as f64))
    });
    let times: Vec<Option<f64>> = runs.into_iter().collect::<Result<_>>()?;
    let mu = laws.mu();
    let limit = |t: f64| (1.0 + mu * t).powf(-4.0 / 3.0);
    let d = survival_sup_distance(&times, t_max, limit);
    // Dvoretzky–Kiefer–Wolfowitz band at the reporting level
    let band = ((2.0 / (1.0 - super::stats::LEVEL)).ln() / (2.0 * n_paths as f64)).sqrt();
    let surv1 = times.iter().filter(|t| t.is_none_or(|t| t > 1.0)).count() as f64 / n_paths as f64;
    let censored = times.iter().filter(|t| t.is_none()).count() as f64 / n_paths as f64;
    let r = StatResult::new(NAME, "sup_distance", d)
        .ci((d - band).max(0.0), d + band)
        .target(0.0, Provenance::Published)
        .judge(PassRule::Below, Some(tol))
        .diag("survival_at_1", surv1)
        .diag("limit_at_1", limit(1.0))
        .diag("censored_fraction", censored);
    Ok(finish(vec![r], &par, Some(seed)))
}

/// Median of sup_{k≤n} max(|X_k − μk|, |Y_k − μk|) against n.
pub fn exp_fluctuation_scaling(cfg: &ExperimentConfig, laws: &LawProvider) -> Result<Vec<StatResult>> {
    const NAME: &str = "fluctuation_scaling";
    let seed = need_seed(cfg)?;
    let mut par = Params::default();
    let default: Vec<u64> = (10..=20).map(|k| 1u64 << k).collect();
    let mut ns = par.ints("n_grid", &cfg.n_grid, &default)?;
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 2 || ns[0] == 0 {
        return Err(Error::Invalid("fluctuation scaling needs at least two distinct positive n".into()));
    }
    let n_paths = par.count("n_paths", cfg.n_paths, 300)?;
    let tol = par.positive("tolerance", cfg.tolerance, 0.05)?;
    let n_max = *ns.last().unwrap();
    let opts = RunOptions { checkpoints: ns.clone(), guard: n_max + 1, ..Default::default() };
    let runs = par::map_range(n_paths as usize, |i| {
        let mut rng = RngStream::new(seed, i as u64).rng();
        run_path(Regime::Fullplane, &StoppingSpec::FixedSteps(n_max), laws, &mut rng, &opts).map(|(s, _)| s)
    });
    let runs: Vec<_> = runs.into_iter().collect::<Result<_>>()?;
    let simultaneous: u64 = runs.iter().map(|s| s.simultaneous_jumps).sum();
    let mut pts = Vec::new();
    let mut slope = StatResult::new(NAME, "slope", 0.0);
    for (j, &n) in ns.iter().enumerate() {
        let sups: Vec<f64> = runs.iter().map(|s| s.sup_dev[j].1).collect();
        let med = median(&sups);
        slope = slope.diag(&format!("median_n{n}"), med);
        pts.push(((n as f64).ln(), med.ln()));
    }
    let fit = least_squares(&pts)?;
    let h = z_level() * fit.slope_se;
    slope.estimate = fit.slope;
    let slope = slope
        .ci(fit.slope - h, fit.slope + h)
        .target(0.75, Provenance::Published)
        .judge(PassRule::AbsTolerance, Some(tol));
    let jumps = StatResult::new(NAME, "simultaneous_jumps", simultaneous as f64)
        .target(0.0, Provenance::Published)
        .verdict(PassRule::Qualitative, simultaneous == 0)
        .diag("steps", (n_paths * n_max) as f64);
    Ok(finish(vec![slope, jumps], &par, Some(seed)))
}

/// P(T₀ > Λp) from the half-plane with p plus edges.
pub fn exp_hit_zero(cfg: &ExperimentConfig, laws: &LawProvider) -> Result<Vec<StatResult>> {
    const NAME: &str = "hit_zero";
    let seed = need_seed(cfg)?;
    let mut par = Params::default();
    let p = par.count("p", cfg.p, 500)?;
    let n_paths = par.count("n_paths", cfg.n_paths, 2000)?;
    let guard = par.count("guard", cfg.guard, DEFAULT_STEP_GUARD)?;
    let mut lambdas = par.floats("lambdas", &cfg.lambdas, &[0.0, 1.0, 2.0, 4.0, 8.0])?;
    if lambdas.iter().any(|l| l.is_nan() || *l < 0.0) {
        return Err(Error::Invalid("Λ must be nonnegative".into()));
    }
    lambdas.sort_by(f64::total_cmp);
    lambdas.dedup();
    let opts = RunOptions { guard, ..Default::default() };
    let runs = par::map_range(n_paths as usize, |i| {
        let mut rng = RngStream::new(seed, i as u64).rng();
        match run_path(Regime::Halfplane { p }, &StoppingSpec::HitLevel(0), laws, &mut rng, &opts) {
            Ok((s, _)) => Ok(Some(s.stop_time)),
            Err(Error::StepGuard(_)) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let times: Vec<Option<u64>> = runs.into_iter().collect::<Result<_>>()?;
    let done = times.iter().filter(|t| t.is_some()).count() as u64;
    let mut out = vec![StatResult::new(NAME, "terminated_fraction", done as f64 / n_paths as f64)
        .target(1.0, Provenance::Published)
        .verdict(PassRule::Qualitative, done == n_paths)];
    let mut prev: Option<f64> = None;
    for &l in &lambdas {
        let k = times.iter().filter(|t| t.is_none_or(|t| t as f64 > l * p as f64)).count() as u64;
        let est = k as f64 / n_paths as f64;
        let (lo, hi) = proportion_ci(k, n_paths);
        let mut r = StatResult::new(NAME, format!("survival_lambda{l}"), est).ci(lo, hi);
        r = if l == 0.0 {
            r.target(1.0, Provenance::Derived).verdict(PassRule::Qualitative, est == 1.0)
        } else {
            r.verdict(PassRule::Qualitative, prev.is_none_or(|q| est < q))
        };
        prev = Some(est);
        out.push(r);
    }
    Ok(finish(out, &par, Some(seed)))
}

/// Which τ^ε_x come before which T_m along one half-plane path.
#[allow(clippy::too_many_arguments)]
fn one_jump_path(
    p: u64,
    eps: f64,
    xs: &[f64],
    ms: &[u64],
    laws: &LawProvider,
    guard: u64,
    seed: u64,
    index: u64,
) -> Result<Vec<Vec<bool>>> {
    let mut rng = RngStream::new(seed, index).rng();
    let mu = laws.mu();
    let (mut x, mut y, mut n) = (0i64, 0i64, 0u64);
    let mut tau: Vec<Option<u64>> = vec![None; xs.len()];
    let mut tm: Vec<Option<u64>> = vec![None; ms.len()];
    let x_max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let m_min = *ms.iter().min().unwrap();
    loop {
        let pn = p as i64 + x;
        let dev = (x as f64 - mu * n as f64).abs().max((y as f64 - mu * n as f64).abs());
        let f = barrier_f(eps, n)?;
        for (t, &level) in tau.iter_mut().zip(xs) {
            if t.is_none() && dev > level * f {
                *t = Some(n);
            }
        }
        for (t, &m) in tm.iter_mut().zip(ms) {
            if t.is_none() && pn <= m as i64 {
                *t = Some(n);
            }
        }
        let all_tau = xs.iter().zip(&tau).all(|(&l, t)| l < x_max || t.is_some());
        if pn <= m_min as i64 || all_tau {
            break;
        }
        if n >= guard {
            return Err(Error::StepGuard(guard));
        }
        let state = Regime::Halfplane { p: pn as u64 };
        let law = laws.law(&state)?;
        let e = sample_event(&law, &mut rng)?.ok_or_else(|| Error::Check("terminal event in the half-plane".into()))?;
        let d = displacement(&e, &state)?;
        x += d.dx;
        y += d.dy;
        n += 1;
    }
    Ok(tau
        .iter()
        .map(|t| {
            tm.iter()
                .map(|s| match (t, s) {
                    (Some(a), Some(b)) => a < b,
                    (Some(_), None) => true,
                    (None, _) => false,
                })
                .collect()
        })
        .collect())
}

/// P(τ^ε_x < T_m) on a grid of (x, m), all cells estimated from the same
/// paths.
pub fn exp_one_jump(cfg: &ExperimentConfig, laws: &LawProvider) -> Result<Vec<StatResult>> {
    const NAME: &str = "one_jump";
    let seed = need_seed(cfg)?;
    let mut par = Params::default();
    let p = par.count("p", cfg.p, 2000)?;
    let eps = par.positive("eps", cfg.eps, 0.5)?;
    let n_paths = par.count("n_paths", cfg.n_paths, 1000)?;
    let guard = par.count("guard", cfg.guard, DEFAULT_STEP_GUARD)?;
    let mut xs = par.floats("x_grid", &cfg.x_grid, &[0.25, 0.5, 1.0, 2.0])?;
    let mut ms = par.ints("m_grid", &cfg.m_grid, &[5, 50, 500])?;
    if xs.iter().any(|x| x.is_nan() || *x < 0.0) || ms.iter().any(|&m| m >= p) {
        return Err(Error::Invalid("x must be nonnegative and every m below p".into()));
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ms.sort_unstable();
    ms.dedup();
    let runs = par::map_range(n_paths as usize, |i| one_jump_path(p, eps, &xs, &ms, laws, guard, seed, i as u64));
    let runs: Vec<Vec<Vec<bool>>> = runs.into_iter().collect::<Result<_>>()?;
    let mut est = vec![vec![0.0; ms.len()]; xs.len()];
    let mut out = Vec::new();
    for (j, &xv) in xs.iter().enumerate() {
        for (k, &m) in ms.iter().enumerate() {
            let c = runs.iter().filter(|r| r[j][k]).count() as u64;
            let (lo, hi) = proportion_ci(c, n_paths);
            est[j][k] = c as f64 / n_paths as f64;
            out.push(StatResult::new(NAME, format!("p_x{xv}_m{m}"), est[j][k]).ci(lo, hi));
        }
    }
    // non-increasing along every line of the grid, strictly on at least one
    let lines_ok = |lines: Vec<Vec<f64>>| {
        lines.iter().all(|v| v.windows(2).all(|w| w[1] <= w[0])) && lines.iter().any(|v| v[v.len() - 1] < v[0])
    };
    let in_x = lines_ok((0..ms.len()).map(|k| est.iter().map(|r| r[k]).collect()).collect());
    let in_m = lines_ok(est.clone());
    out.push(StatResult::new(NAME, "decreasing_in_x", f64::from(u8::from(in_x))).verdict(PassRule::Qualitative, in_x));
    out.push(StatResult::new(NAME, "decreasing_in_m", f64::from(u8::from(in_m))).verdict(PassRule::Qualitative, in_m));
    Ok(finish(out, &par, Some(seed)))
}

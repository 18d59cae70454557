use super::config::{ExperimentConfig, Params};
use super::report::{PassRule, Provenance, StatResult};
use super::stats::Moments;
use super::walk::need_seed;
use crate::error::{Error, Result};
use crate::map::{enumerate_maps, sample_finite_map, trace_leftmost_interface};
use crate::par;
use crate::sim::RngStream;
use crate::tutte::build_evaluated_table;

/// Length of the leftmost interface in sampled maps with n faces.
/// Descriptive only: there is no target at fixed size.
pub fn exp_interface_length(cfg: &ExperimentConfig) -> Result<Vec<StatResult>> {
    const NAME: &str = "interface_length";
    let seed = need_seed(cfg)?;
    let mut par = Params::default();
    let p = par.count("p", cfg.p, 3)? as usize;
    let q = par.count("q", cfg.q, 3)? as usize;
    let draws = par.count("n_paths", cfg.n_paths, 200)?;
    let nu = par.positive("nu", cfg.nu, crate::algebra::constants_critical().nu_c.to_f64())?;
    let ns = par.ints("n_grid", &cfg.n_grid, &[4, 8, 16, 32])?;
    let n_max = *ns.iter().max().unwrap() as usize;
    let table = build_evaluated_table(n_max, p + q + 2, nu)?;
    let mut out = Vec::new();
    for (j, &n) in ns.iter().enumerate() {
        let runs = par::map_range(draws as usize, |i| {
            let mut rng = RngStream::new(seed, j as u64 * draws + i as u64).rng();
            let m = sample_finite_map(p, q, n as usize, &table, &mut rng)?;
            Ok::<_, Error>((trace_leftmost_interface(&m)?.length, m.n_internal_faces()))
        });
        let runs: Vec<(usize, usize)> = runs.into_iter().collect::<Result<_>>()?;
        let mut mom = Moments::default();
        for &(l, _) in &runs {
            mom.push(l as f64);
        }
        let (lo, hi) = mom.ci();
        let min = runs.iter().map(|r| r.0).min().unwrap_or(0);
        let max = runs.iter().map(|r| r.0).max().unwrap_or(0);
        let faces_ok = runs.iter().all(|r| r.1 == n as usize);
        out.push(
            StatResult::new(NAME, format!("mean_length_n{n}"), mom.mean())
                .ci(lo, hi)
                .verdict(PassRule::Qualitative, min >= 1 && faces_ok)
                .diag("min", min as f64)
                .diag("max", max as f64),
        );
    }
    let edge = enumerate_maps(1, 1, 0, &table)?;
    let len = trace_leftmost_interface(&edge[0].map)?.length;
    out.push(
        StatResult::new(NAME, "edge_map_length", len as f64)
            .target(1.0, Provenance::Derived)
            .verdict(PassRule::Exact, edge.len() == 1 && len == 1),
    );
    Ok(out.into_iter().map(|r| r.params(&par.0, Some(seed))).collect())
}

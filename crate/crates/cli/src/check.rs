use ising_peel::experiments::{emit_report, render, run_experiment, verify_suite, ExperimentConfig, ExperimentId, Format, IdentityCheck, VerifyOptions};
use ising_peel::sim::LawProvider;
use serde_json::json;

use crate::args::{ExperimentArgs, Global, OutFormat, VerifyArgs};
use crate::output::{emit, rows_out, table_format, CliError, CliResult};

pub fn verify(g: &Global, a: &VerifyArgs) -> CliResult {
    if a.precision < 64 || a.order == 0 || a.series_orders == 0 {
        return Err(CliError::Usage("need --precision ≥ 64 and positive orders".into()));
    }
    let opts = VerifyOptions {
        precision_bits: a.precision,
        funceq_order: a.order,
        halfplane_p: a.halfplane_p,
        series_orders: a.series_orders,
    };
    let checks: Vec<IdentityCheck> = verify_suite(&opts);
    let failed = checks.iter().filter(|c| !c.pass).count();
    let wrap = json!({ "precision_bits": a.precision, "order": a.order, "pass": failed == 0 });
    rows_out(g, OutFormat::Csv, &checks, wrap, "checks")?;
    for c in checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: {}", c.name, c.detail);
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failed} of {} identities failed", checks.len())))
    }
}

fn flags(a: &ExperimentArgs) -> ExperimentConfig {
    ExperimentConfig {
        experiment: None,
        seed: a.seed,
        p: a.p,
        q: a.q,
        m: a.m,
        eps: a.eps,
        n_paths: a.n_paths,
        n_steps: a.n_steps,
        k_lo: a.k_lo,
        k_hi: a.k_hi,
        fit_lo: a.fit_lo,
        x_grid: a.x_grid.clone(),
        m_grid: a.m_grid.clone(),
        lambdas: a.lambdas.clone(),
        n_grid: a.n_grid.clone(),
        t_max: a.t_max,
        tolerance: a.tolerance,
        guard: a.guard,
        nu: a.nu,
        precision_bits: a.precision_bits,
        out: None,
    }
}

/// The file config (if any) overlaid with the flags.
pub fn resolve_config(a: &ExperimentArgs) -> CliResult<ExperimentConfig> {
    let id: ExperimentId = a.name.parse()?;
    let base = match &a.config {
        Some(path) => ExperimentConfig::from_toml_str(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(other) = base.experiment.filter(|&e| e != id) {
        return Err(CliError::Usage(format!("config is for experiment {other}, not {id}")));
    }
    let cfg = base.overlaid(&flags(a));
    Ok(ExperimentConfig { experiment: Some(id), ..cfg })
}

pub fn experiment(g: &Global, a: &ExperimentArgs) -> CliResult {
    let cfg = resolve_config(a)?;
    let (id, _) = cfg.identify()?;
    let format = match table_format(g, OutFormat::Csv)? {
        OutFormat::Json => Format::Json,
        _ => Format::Csv,
    };
    let laws = LawProvider::shared()?;
    let results = run_experiment(&cfg, &laws)?;
    match g.out.as_ref().or(cfg.out.as_ref()) {
        Some(dir) => {
            for p in emit_report(&results, dir, id.name())? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => emit(g, &render(&results, format)?)?,
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.statistic.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{id}: {} did not pass", failed.join(", "))))
    }
}

use ising_peel::sim::{parse_stopping, run_path, RngStream, RunOptions, DEFAULT_STEP_GUARD};
use serde::Serialize;
use serde_json::json;

use crate::args::{Global, OutFormat, SampleArgs};
use crate::numbers::{provider_for, regime};
use crate::output::{csv_string, emit, json_string, need_seed, table_format, CliError, CliResult};

#[derive(Serialize, Debug)]
struct PathRow {
    path_id: u64,
    seed: u64,
    stop_reason: String,
    stop_time: u64,
    x_final: i64,
    y_final: i64,
    min_x: i64,
    min_y: i64,
}

pub fn sample(g: &Global, a: &SampleArgs) -> CliResult {
    let seed = need_seed(a.seed)?;
    let rule = match (a.steps, a.stopping.as_deref()) {
        (Some(n), Some(s)) => format!("steps:{n},{s}"),
        (Some(n), None) => format!("steps:{n}"),
        (None, Some(s)) => s.to_string(),
        (None, None) => return Err(CliError::Usage("give --steps or --stopping".into())),
    };
    let stopping = parse_stopping(&rule)?;
    if a.paths == 0 {
        return Err(CliError::Usage("--paths must be at least 1".into()));
    }
    let format = table_format(g, OutFormat::Csv)?;
    if a.record && format != OutFormat::Json {
        return Err(CliError::Usage("--record needs --format json".into()));
    }
    let init = regime(a.regime, a.p, a.q)?;
    // perimeters grow by at most one per step
    let grid = a.grid.unwrap_or(init.p().unwrap_or(0) as usize + a.q.unwrap_or(0) as usize + 2 + a.steps.unwrap_or(64).min(200) as usize);
    let laws = provider_for(&init, grid)?;
    let opts = RunOptions { record: a.record, guard: a.guard.unwrap_or(DEFAULT_STEP_GUARD), checkpoints: Vec::new() };
    let runs = ising_peel::par::map_range(a.paths as usize, |i| {
        let mut rng = RngStream::new(seed, i as u64).rng();
        run_path(init, &stopping, &laws, &mut rng, &opts).map(|(mut s, p)| {
            s.path_id = i as u64;
            (s, p)
        })
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let text = if format == OutFormat::Csv {
        let rows: Vec<PathRow> = runs
            .iter()
            .map(|(s, _)| PathRow {
                path_id: s.path_id,
                seed,
                stop_reason: s.stop_reason.label(),
                stop_time: s.stop_time,
                x_final: s.x_final,
                y_final: s.y_final,
                min_x: s.min_x,
                min_y: s.min_y,
            })
            .collect();
        csv_string(&rows)?
    } else {
        let paths: Vec<_> = runs.iter().map(|(s, p)| json!({ "summary": s, "path": p })).collect();
        json_string(&json!({ "seed": seed, "regime": init, "stopping": stopping, "paths": paths }))?
    };
    emit(g, &text)
}

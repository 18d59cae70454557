//! Perimeter-process paths under the three peeling regimes.

mod rng;
mod run;
mod stopping;

pub use rng::{splitmix64, RngStream};
pub use run::{batch_run, run_path, BatchConfig, LawProvider, PathSummary, PerimeterPath, RunOptions, DEFAULT_STEP_GUARD};
pub use stopping::{barrier_f, parse_stopping, StopReason, StoppingSpec};

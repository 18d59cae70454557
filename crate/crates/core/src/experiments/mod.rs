//! Scripted experiments: Monte Carlo estimates and exact computations
//! compared against their targets, with CSV and JSON reports.

mod config;
mod exact;
mod maps;
mod report;
mod stats;
mod verify;
mod walk;

pub use config::{ExperimentConfig, ExperimentId, Params};
pub use exact::{c_m_sequence, exp_cm_limit, exp_tail_exponents};
pub use maps::exp_interface_length;
pub use report::{emit_report, parse_csv, parse_json, render, to_csv, to_json, CsvRow, Format, PassRule, Provenance, StatResult, REPORT_VERSION};
pub use stats::{least_squares, median, proportion_ci, z_level, Fit, Moments, LEVEL};
pub use verify::{
    verify_appendix, verify_constants, verify_funceq, verify_halfplane_normalization, verify_series_engines, verify_suite, IdentityCheck,
    VerifyOptions,
};
pub use walk::{exp_drift, exp_fluctuation_scaling, exp_hit_zero, exp_one_jump, exp_tm_law, survival_sup_distance, DRIFT_STREAMS};

use crate::error::Result;
use crate::sim::LawProvider;

/// Runs the experiment named in the config.
pub fn run_experiment(cfg: &ExperimentConfig, laws: &LawProvider) -> Result<Vec<StatResult>> {
    let (id, _) = cfg.identify()?;
    match id {
        ExperimentId::Drift => exp_drift(cfg, laws),
        ExperimentId::TmLaw => exp_tm_law(cfg, laws),
        ExperimentId::CmLimit => exp_cm_limit(cfg, laws),
        ExperimentId::TailExponents => exp_tail_exponents(cfg, laws),
        ExperimentId::FluctuationScaling => exp_fluctuation_scaling(cfg, laws),
        ExperimentId::HitZero => exp_hit_zero(cfg, laws),
        ExperimentId::OneJump => exp_one_jump(cfg, laws),
        ExperimentId::InterfaceLength => exp_interface_length(cfg),
    }
}

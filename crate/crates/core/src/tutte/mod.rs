//! Coefficients [tⁿ]z_{p,q}(ν) from the peeling recurrence, and the checks of
//! the functional equations they must satisfy.

mod funceq;
mod partition;
mod poly;
mod table;

pub use funceq::{verify_functional_equations, FamilyResult, FuncEqReport};
pub use partition::{
    eval_partition, exponent_estimates, radius_estimate, relative_drift, volume_exponent_probe, PartitionValue,
    TailMode,
};
pub use poly::NuPoly;
pub use table::{
    build_critical_table, build_evaluated_table, build_exact_table, build_exact_table_capped,
    build_scaled_table, Coef, CoeffTable, ExactTable, EVAL_CAP, EXACT_CAP,
};

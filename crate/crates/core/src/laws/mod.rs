//! Peeling transition laws for a finite boundary, the half-plane and the
//! full plane, and sampling of single events.

mod event;
mod law;
mod sample;
mod tables;

pub use event::{displacement, Displacement, Family, PeelingEvent, Regime};
pub use law::{
    finite_total_exact, fullplane_masses_exact, halfplane_masses_exact, law_finite, law_fullplane, law_halfplane,
    Block, EventLaw, PartitionZ, ZValues, DEFAULT_TOLERANCE, FINITE_TOLERANCE,
};
pub use sample::sample_event;
pub use tables::{BoundaryTables, LawConstants, Seq, ASYMPTOTIC_ORDER, DEFAULT_CAPACITY, DIRECT_LIMIT, JUMP_GRID_P, JUMP_ROWS};

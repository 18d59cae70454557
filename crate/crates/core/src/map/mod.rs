//! Planar maps: exact sampling of finite Ising-triangulations, replay of
//! peeling events into explored maps, balls and the local distance, and
//! interface tracing.

mod ball;
mod builder;
mod explore;
mod interface;
mod planar;
mod sampler;

pub use planar::{validate_map, ColoredPlanarMap, Expected, FaceKind, Spin, ValidationReport};
pub use sampler::{enumerate_maps, sample_finite_map, EnumeratedMap, SamplerNode};
pub use explore::{truncate_map, CriticalFiller, ExploredMap, FillMode, StepReport};
pub use ball::{ball, ball_sampler_halfplane, local_distance, Ball, HalfplaneBall};
pub use interface::{trace_leftmost_interface, Interface};

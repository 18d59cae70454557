//! Exact scalars: rationals, the quadratic field Q(√7), and a precision-tagged
//! binary float used for numeric evaluation.

mod constants;
mod field;
mod prec;
mod rational;
mod series;
mod surd;

pub use constants::{constants_critical, CriticalConstants};
pub use field::Field;
pub use prec::PrecReal;
pub use rational::{parse_rational, rat, rat_f64, Rational};
pub use series::Series;
pub use surd::{surd_eval, surd_sign, QuadSurd};

/// Default working precision for [`PrecReal`] evaluation.
pub const DEFAULT_PRECISION: usize = 128;

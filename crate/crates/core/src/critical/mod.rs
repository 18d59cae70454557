//! Exact evaluation of the critical rational parametrizations: boundary
//! series at u_c, critical values and constants, the parametrization of
//! z₁ and z₃, and the on-curve check of the quadratic-method identity.

mod appendix;
mod bivariate;
mod boundary;
mod param;
mod rp13;
mod singular;
mod values;

pub use appendix::{appendix_residual, appendix_residual_exact};
pub use bivariate::{row_tails, WGrid};
pub use boundary::{boundary_components, boundary_series, boundary_series_f64, revert_u_hat, BoundarySeries, BoundarySeriesF64};
pub use param::{eval_param, eval_param_prec, param, poly_eval, RationalFunction1V, SurdPoly, Which};
pub use rp13::{rp13_at, rp13_series, Rp13Series};
pub use singular::{epsilon_of_sigma, singular_expansions, AsymptoticState, CoeffAsymptotics, SingularExpansions};
pub use values::{drift_and_tails, u_hat_vanishing_order, values_at_uc, CriticalValues, DriftTails};

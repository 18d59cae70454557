//! Exact enumeration and peeling simulation for Ising-decorated random
//! triangulations with Dobrushin boundary conditions.

pub mod algebra;
pub mod critical;
pub mod error;
pub mod experiments;
pub mod laws;
pub mod map;
pub mod par;
pub mod sim;
pub mod tutte;

pub use error::{Error, Result};

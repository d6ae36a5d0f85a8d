//! Exact construction of generalized equator maps `u^(l)` on the unit ball,
//! their stability classification for the extrinsic k-energy and the
//! p-energy, and floating-point cross-checks of the symbolic layer.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod numeric;
pub mod p_energy;
pub mod radial_map;
pub mod stability;

pub use error::{Error, Result};

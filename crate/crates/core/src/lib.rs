//! Numerics for Jacob's ladders: the Riemann zeta function on the critical
//! line, the Hardy-Littlewood integral, the ladder itself, its iterations and
//! the orthogonal systems built from them.

pub mod cli;
pub mod error;
pub mod hlgrid;
pub mod iterations;
pub mod ladder;
pub mod orthosys;
pub mod quad;
pub mod specfun;

#[cfg(test)]
mod test_grid;

pub use error::{Error, Result};

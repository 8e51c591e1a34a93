//! Phase-space quantum mechanics of a charged particle in a uniform magnetic
//! field: the Moyal star product, Wigner functions of the Landau levels,
//! coherent states, marginal densities and uncertainty relations.

pub mod cli;
pub mod diff;
pub mod error;
pub mod marginals;
pub mod params;
pub mod quadrature;
pub mod specfun;
pub mod star;
pub mod states;
pub mod uncertainty;
pub mod verify;

pub use error::{Error, Result};
pub use params::{PhasePoint, PhysParams};

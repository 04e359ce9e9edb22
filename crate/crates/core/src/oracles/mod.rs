//! Independent checks on the convolution solver: an explicit finite-difference
//! scheme, a persistent-random-walk simulation and the Duhamel fixed-point
//! residual of the transformed problem.

mod duhamel;
mod fd;
mod report;
mod walk;

pub use duhamel::{duhamel_residual, DuhamelConfig};
pub use fd::{fd_solve, FDConfig};
pub use report::{Metric, ValidationReport};
pub use walk::{binomial_sigma, prw_params_from_continuum, prw_simulate, FirstStep, LatticeHistogram, WalkConfig};

//! Damped wave (telegraph) equation u_tt + k u_t = c² u_xx on the line.
//!
//! The crate evaluates the fundamental solution of the transformed problem
//! v_tt = c² v_xx + (k²/4) v in terms of I₀ and I₁, builds solutions for
//! sampled and δ-type initial data from it, and checks them against a
//! finite-difference scheme, a persistent random walk and a Duhamel
//! fixed-point identity.

pub mod bessel;
pub mod cli;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod measure;
pub mod oracles;
pub mod quadrature;
pub mod semigroup;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{SampledField, SpaceGrid};
pub use kernel::MediumParams;
pub use measure::{Atom, MixedMeasure};

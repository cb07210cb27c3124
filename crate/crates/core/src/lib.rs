//! Microwave absorption and dielectric loss from magnetic-dipole transitions
//! between zero-field-split spin sublevels of paramagnetic defects.
//!
//! The pipeline runs bottom-up:
//!
//! * [`spin`] builds spin operators and Hamiltonians and evaluates the
//!   dimensionless transition moment `M_IF`,
//! * [`lineshape`] supplies the broadening profile and the temperature and
//!   power modifiers,
//! * [`absorption`] turns a moment into a cross section, an absorption
//!   coefficient and a loss tangent,
//! * [`ensemble`] sums species and hyperfine lines into spectra,
//! * [`emission`] relates the same moments to spontaneous emission rates.
//!
//! Angular frequencies [rad/s] are used everywhere inside the library.

pub mod absorption;
pub mod cli;
pub mod constants;
pub mod emission;
pub mod ensemble;
mod error;
pub mod linalg;
pub mod lineshape;
pub mod output;
pub mod spin;

pub use error::{Error, Result};

//! Casimir force between two ideal conducting plates that enclose a
//! dispersive, absorptive magnetodielectric medium.
//!
//! The medium is an oscillator continuum characterised by its coupling
//! density; forces are computed on the imaginary frequency axis from the
//! dressed field propagator, in natural units (`hbar = c = 1`) and per unit
//! plate area. Negative forces are attractive.

pub mod checks;
pub mod error;
pub mod forces;
pub mod medium;
pub mod propagators;
pub mod quadrature;

pub use error::{CasimirError, Result};

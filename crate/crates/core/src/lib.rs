//! Solver library for the elastohydrodynamic point-contact problem written as
//! a linear complementarity problem, together with the linear
//! convection–diffusion problem used to calibrate the κ-scheme splittings and
//! a local Fourier analysis of the line smoothers.

pub mod banded;
pub mod ehl;
pub mod error;
pub mod grid;
pub mod harness;
pub mod kernel;
pub mod lfa;
pub mod limiter;
pub mod mlmi;
pub mod linear_cd;
pub mod physics;
pub mod report;

pub use error::{Error, Result};

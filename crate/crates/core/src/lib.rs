//! Jet-group calculus and homogeneity analysis for higher-order ODE systems on `R^m`.
//!
//! The crate is organised bottom-up:
//!
//! * [`symexpr`] exact symbolic scalars over jet coordinates,
//! * [`jetgroup`] the jet groups `L^n`, their Lie algebras and exponential maps,
//! * [`jetcalc`] points, vector fields and 1-forms on `T^N R^m` together with the group action,
//! * [`homog`] homogeneity of differential equation fields and projective equivalence,
//! * [`varcalc`] parametric Lagrangians, Hilbert and Euler-Lagrange forms,
//! * [`geod`] numerical geodesics and path comparison,
//! * [`systems`] ready-made example systems.

pub mod error;
pub mod geod;
pub mod homog;
pub mod jetcalc;
pub mod jetgroup;
mod linalg;
pub mod symexpr;
pub mod systems;
pub mod varcalc;

pub use error::{Error, EvalError, Result};

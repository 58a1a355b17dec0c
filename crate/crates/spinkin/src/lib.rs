//! Rotational kinematics of spin states: total variance, speed excess and
//! total acceleration for pure and mixed states, with the underlying state
//! space geometry (projective and Bures) computed explicitly.

pub mod averages;
pub mod bures;
pub mod error;
pub mod fs_kinematics;
pub mod matrix;
pub mod measures;
pub mod spin_algebra;
pub mod states;
pub mod survey;

pub use error::{Error, Result};

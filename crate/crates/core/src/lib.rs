//! Finite laboratory for pairs of commuting group actions and the von
//! Neumann algebras they generate.

pub mod algebra;
pub mod crossed;
pub mod error;
pub mod group;
pub mod heisenberg;
pub mod lab;
pub mod matrix;
pub mod operators;
pub mod rational;
pub mod symmetric;
pub mod systems;

pub use error::{LabError, Result};

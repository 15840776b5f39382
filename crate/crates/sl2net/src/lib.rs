//! Evaluated sl(2) quantum-algebra R-matrices, their twist network and limit
//! degenerations, with numerical checks of the identities relating them.

pub mod error;
pub mod finite;
pub mod checks;
pub mod cli;
pub mod limits;
pub mod linalg;
pub mod rmatrix;
pub mod specfun;
pub mod twistnet;

pub use error::{Error, Result};

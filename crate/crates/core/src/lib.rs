//! Numerical verification of quaternionic contact structures on the
//! seven-sphere: integrability checks, adapted connections, linearized
//! deformations and principal symbols of the deformation complex.

pub mod cli;
pub mod connection;
pub mod deform;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod qcstruct;
pub mod quatalg;
pub mod rep4;
pub mod symbols;

pub use error::{QcError, Result};

pub mod cli;
pub mod constants;
pub mod curve;
pub mod cycles;
pub mod error;
pub mod exact;
pub mod homology;
pub mod lattice;
pub mod mesh;
pub mod periods;
pub mod quadrature;
pub mod report;
pub mod symmetry;

pub use error::{Error, Result};

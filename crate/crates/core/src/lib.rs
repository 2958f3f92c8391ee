//! Zonal polynomials of the real Grassmannian `G_{m,n}`, their three-term
//! (Jacobi) structure, and linear programming bounds for codes with a
//! prescribed minimal chordal distance.

pub mod bounds;
pub mod cli;
pub mod codes;
pub mod error;
pub mod jack;
pub mod partitions;
pub mod rational;
pub mod spectra;
pub mod sympoly;
pub mod threeterm;
pub mod univariate;
pub mod zonal;

pub use error::{Error, Result};
pub use partitions::{Partition, PartitionIndexSet};
pub use rational::Rational;
pub use sympoly::SymPoly;

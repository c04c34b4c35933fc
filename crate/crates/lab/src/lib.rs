//! Desk-scale workbench around `clusterlab-core`: dense and matrix-free
//! eigensolvers, symmetry and duality verification, parameter sweeps and
//! the file formats behind the `clusterlab` command-line tool.

pub mod cli;
pub mod dense;
pub mod error;
pub mod io;
pub mod spectra;
pub mod symmetry;
pub mod verify;

pub use error::{LabError, Result};

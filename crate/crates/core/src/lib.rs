//! Randomized polynomial kernels for cut problems built on represented matroids:
//! gammoids, representative sets and cut-covering sets.

pub mod a2sat;
pub mod acceptance;
pub mod cli;
pub mod cutcover;
pub mod error;
pub mod exactfield;
pub mod gen;
pub mod graphcut;
pub mod io;
pub mod matroid;
pub mod mwc;
pub mod oracle;
pub mod paircut;
pub mod repset;

pub use error::{Error, Result};

//! Exact computations for hyperpolygon quotients of `(P^1)^n`: maximally
//! biconnected complexes, polygon and hyperpolygon orbit cones, bunches,
//! GIT chambers and the relations among Cox ring generators.

pub mod arrangements;
pub mod bunches;
#[cfg(feature = "cli")]
pub mod cli;
pub mod complexes;
pub mod coxrelations;
pub mod error;
pub mod hyper_cones;
pub mod oracle;
pub mod polygon_cones;
pub mod ratgeom;

pub use error::{Error, Result};

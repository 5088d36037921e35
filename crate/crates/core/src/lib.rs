//! Numerical laboratory for composition operators on Hardy and Hardy-Orlicz spaces.
//!
//! The pieces fit together as a pipeline: an [`orlicz::OrliczFunction`] supplies the
//! growth data, [`symbols`] turns it into an analytic self-map of the disk, [`carleson`]
//! samples the boundary values to estimate the pullback measure, and [`criteria`]
//! decides compactness and Schatten-type conditions from the estimates.

pub mod carleson;
pub mod criteria;
pub mod error;
pub mod experiment;
pub mod orlicz;
pub mod spec;
pub mod symbols;
pub mod trend;

pub use error::{Error, Result};

/// Version string embedded in every report bundle.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

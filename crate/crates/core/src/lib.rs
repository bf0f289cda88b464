//! Skeleton-based stochastic simulation of turbidite channel systems.

pub mod bspline;
pub mod demo;
pub mod error;
pub mod geom;
pub mod graph;
pub mod lobe;
pub mod pipeline;
pub mod plot;
pub mod raster;
pub mod region;
pub mod skeleton;
pub mod stats;
pub mod synth;
pub mod thinning;
pub mod volume;

pub use error::{Error, Result};

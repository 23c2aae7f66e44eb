//! Multipath lifetime maps.
//!
//! A receiver grid is ray traced against a polygonal scene. Each sample's
//! validity vector (one bit per candidate propagation path) is hashed into a
//! cell id; samples sharing an id form a cell. The crate counts cells and
//! their connected regions and measures cell area and the average distance
//! to the nearest foreign sample across transmitter sweeps.

pub mod cells;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod render;
pub mod scenes;
pub mod sweep;
pub mod tracer;

pub use error::{Error, Result};

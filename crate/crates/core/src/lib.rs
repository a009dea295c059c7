//! Cyclist blind-spot detection toolkit.

pub mod alert;
pub mod backend;
pub mod config;
pub mod dataset;
pub mod eval;
pub mod geometry;
pub mod par;
pub mod pipeline;
pub mod raster;
pub mod scenario;

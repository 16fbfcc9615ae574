//! Detects inter-view relations in multi-view chart canvases and rewrites
//! canvases with operations that resolve them.

pub mod config;
pub mod data;
pub mod model;
pub mod operations;
pub mod registry;
pub mod relations;
pub mod render;
pub mod spec_io;

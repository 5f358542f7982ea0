//! Detection, counting and segmentation of cells in two-channel fluorescence images.

pub mod binarize;
pub mod cli;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod image;
pub mod io;
pub mod level_select;
pub mod pipeline;
pub mod regions;
pub mod render;
pub mod saliency;
pub mod segment;
pub mod synthetic;

pub use error::{Error, Result};

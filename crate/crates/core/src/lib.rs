//! Classical skin-lesion segmentation.
//!
//! Two complete pipelines are provided:
//!
//! * [`pipeline_watershed::segment_method1`]: channel-wise median filtering,
//!   top-hat hair masking and inpainting, Otsu binarization, distance-based
//!   markers and marker-controlled watershed.
//! * [`pipeline_meanshift::segment_method2`]: border filling by corner region
//!   growing, hair removal, pyramid mean-shift filtering, Otsu binarization
//!   and morphological post-processing.
//!
//! [`eval`] scores either pipeline against ground-truth masks with the
//! Jaccard index, and [`synth`] generates deterministic test lesions.

pub mod config;
pub mod distance;
pub mod error;
pub mod eval;
pub mod filters;
pub mod inpaint;
pub mod io;
pub mod labels;
pub mod meanshift;
pub mod morphology;
pub mod pipeline_meanshift;
pub mod pipeline_watershed;
pub mod raster;
pub mod synth;
pub mod threshold;

pub use config::{ColorMode, PipelineConfig, TophatPolarity};
pub use error::{Error, Result};
pub use inpaint::InpaintMethod;
pub use raster::{BinaryMask, FloatImage, GrayImage, LabelMap, Raster, RgbImage};

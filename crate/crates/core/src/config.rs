//! Every tunable of the two pipelines, with a flat `key = value` text format.
//!
//! ```text
//! # comments run to the end of the line
//! median_radius = 2
//! tophat_polarity = black
//! ```
//!
//! Unknown keys and malformed values are errors.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::inpaint::InpaintMethod;
use crate::meanshift::MeanShiftParams;

/// Which top-hat isolates hair: `Black` finds dark strokes, `White` bright ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TophatPolarity {
    Black,
    White,
}

impl FromStr for TophatPolarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "black" => Ok(Self::Black),
            "white" => Ok(Self::White),
            other => Err(Error::Config(format!(
                "unknown top-hat polarity {other:?} (expected black or white)"
            ))),
        }
    }
}

impl fmt::Display for TophatPolarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Black => "black",
            Self::White => "white",
        })
    }
}

/// Whether the mean-shift pipeline filters the gray image or the color image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColorMode {
    Gray,
    Color,
}

impl ColorMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gray => "gray",
            Self::Color => "color",
        }
    }
}

impl FromStr for ColorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gray" => Ok(Self::Gray),
            "color" | "bgr" | "rgb" => Ok(Self::Color),
            other => Err(Error::Config(format!(
                "unknown color mode {other:?} (expected gray or color)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub median_radius: usize,
    pub tophat_radius: usize,
    pub tophat_polarity: TophatPolarity,
    pub hair_threshold: u8,
    pub hair_close_radius: usize,
    pub hair_dilate_radius: usize,
    pub inpaint_method: InpaintMethod,
    pub inpaint_radius: usize,
    pub diffusion_iterations: usize,
    pub marker_clean_radius: usize,
    pub bg_dilate_radius: usize,
    pub fg_dist_fraction: f64,
    pub border_dilate_radius: usize,
    pub border_open_radius: usize,
    pub border_threshold: u8,
    pub border_fill_value: u8,
    pub spatial_bandwidth: usize,
    pub color_bandwidth: f64,
    pub pyramid_levels: usize,
    pub max_iterations: usize,
    pub convergence_eps: f64,
    pub post_morph_radius: usize,
    pub color_mode: ColorMode,
    pub truth_suffix: String,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            median_radius: 2,
            tophat_radius: 20,
            tophat_polarity: TophatPolarity::Black,
            hair_threshold: 80,
            hair_close_radius: 20,
            hair_dilate_radius: 2,
            inpaint_method: InpaintMethod::Telea,
            inpaint_radius: 20,
            diffusion_iterations: 300,
            marker_clean_radius: 3,
            bg_dilate_radius: 15,
            fg_dist_fraction: 0.7,
            border_dilate_radius: 1,
            border_open_radius: 5,
            border_threshold: 90,
            border_fill_value: 220,
            spatial_bandwidth: 21,
            color_bandwidth: 40.0,
            pyramid_levels: 2,
            max_iterations: 10,
            convergence_eps: 1.0,
            post_morph_radius: 5,
            color_mode: ColorMode::Gray,
            truth_suffix: "_segmentation".into(),
        }
    }
}

/// Config keys in file order.
pub const KEYS: [&str; 24] = [
    "median_radius",
    "tophat_radius",
    "tophat_polarity",
    "hair_threshold",
    "hair_close_radius",
    "hair_dilate_radius",
    "inpaint_method",
    "inpaint_radius",
    "diffusion_iterations",
    "marker_clean_radius",
    "bg_dilate_radius",
    "fg_dist_fraction",
    "border_dilate_radius",
    "border_open_radius",
    "border_threshold",
    "border_fill_value",
    "spatial_bandwidth",
    "color_bandwidth",
    "pyramid_levels",
    "max_iterations",
    "convergence_eps",
    "post_morph_radius",
    "color_mode",
    "truth_suffix",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::Config(format!("bad value {value:?} for {key}: {e}")))
}

impl PipelineConfig {
    /// Sets one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "median_radius" => self.median_radius = parse(key, value)?,
            "tophat_radius" => self.tophat_radius = parse(key, value)?,
            "tophat_polarity" => self.tophat_polarity = parse(key, value)?,
            "hair_threshold" => self.hair_threshold = parse(key, value)?,
            "hair_close_radius" => self.hair_close_radius = parse(key, value)?,
            "hair_dilate_radius" => self.hair_dilate_radius = parse(key, value)?,
            "inpaint_method" => self.inpaint_method = parse(key, value)?,
            "inpaint_radius" => self.inpaint_radius = parse(key, value)?,
            "diffusion_iterations" => self.diffusion_iterations = parse(key, value)?,
            "marker_clean_radius" => self.marker_clean_radius = parse(key, value)?,
            "bg_dilate_radius" => self.bg_dilate_radius = parse(key, value)?,
            "fg_dist_fraction" => self.fg_dist_fraction = parse(key, value)?,
            "border_dilate_radius" => self.border_dilate_radius = parse(key, value)?,
            "border_open_radius" => self.border_open_radius = parse(key, value)?,
            "border_threshold" => self.border_threshold = parse(key, value)?,
            "border_fill_value" => self.border_fill_value = parse(key, value)?,
            "spatial_bandwidth" => self.spatial_bandwidth = parse(key, value)?,
            "color_bandwidth" => self.color_bandwidth = parse(key, value)?,
            "pyramid_levels" => self.pyramid_levels = parse(key, value)?,
            "max_iterations" => self.max_iterations = parse(key, value)?,
            "convergence_eps" => self.convergence_eps = parse(key, value)?,
            "post_morph_radius" => self.post_morph_radius = parse(key, value)?,
            "color_mode" => self.color_mode = parse(key, value)?,
            "truth_suffix" => self.truth_suffix = value.to_owned(),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Textual value of one field, in the form [`set`](Self::set) accepts.
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "median_radius" => self.median_radius.to_string(),
            "tophat_radius" => self.tophat_radius.to_string(),
            "tophat_polarity" => self.tophat_polarity.to_string(),
            "hair_threshold" => self.hair_threshold.to_string(),
            "hair_close_radius" => self.hair_close_radius.to_string(),
            "hair_dilate_radius" => self.hair_dilate_radius.to_string(),
            "inpaint_method" => self.inpaint_method.name().to_owned(),
            "inpaint_radius" => self.inpaint_radius.to_string(),
            "diffusion_iterations" => self.diffusion_iterations.to_string(),
            "marker_clean_radius" => self.marker_clean_radius.to_string(),
            "bg_dilate_radius" => self.bg_dilate_radius.to_string(),
            "fg_dist_fraction" => self.fg_dist_fraction.to_string(),
            "border_dilate_radius" => self.border_dilate_radius.to_string(),
            "border_open_radius" => self.border_open_radius.to_string(),
            "border_threshold" => self.border_threshold.to_string(),
            "border_fill_value" => self.border_fill_value.to_string(),
            "spatial_bandwidth" => self.spatial_bandwidth.to_string(),
            "color_bandwidth" => self.color_bandwidth.to_string(),
            "pyramid_levels" => self.pyramid_levels.to_string(),
            "max_iterations" => self.max_iterations.to_string(),
            "convergence_eps" => self.convergence_eps.to_string(),
            "post_morph_radius" => self.post_morph_radius.to_string(),
            "color_mode" => self.color_mode.name().to_owned(),
            "truth_suffix" => self.truth_suffix.clone(),
            _ => return None,
        })
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {assignment:?}")))?;
        self.set(key, value)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fg_dist_fraction > 0.0 && self.fg_dist_fraction < 1.0) {
            return Err(Error::Config(format!(
                "fg_dist_fraction must lie in (0, 1), got {}",
                self.fg_dist_fraction
            )));
        }
        if self.spatial_bandwidth < 1 {
            return Err(Error::Config("spatial_bandwidth must be at least 1".into()));
        }
        if !(self.color_bandwidth >= 1.0 && self.color_bandwidth.is_finite()) {
            return Err(Error::Config("color_bandwidth must be at least 1".into()));
        }
        if self.max_iterations < 1 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !(self.convergence_eps >= 0.0 && self.convergence_eps.is_finite()) {
            return Err(Error::Config("convergence_eps must be non-negative".into()));
        }
        if self.inpaint_radius < 1 {
            return Err(Error::Config("inpaint_radius must be at least 1".into()));
        }
        if self.diffusion_iterations < 1 {
            return Err(Error::Config("diffusion_iterations must be at least 1".into()));
        }
        Ok(())
    }

    pub fn mean_shift(&self) -> MeanShiftParams {
        MeanShiftParams {
            spatial_bandwidth: self.spatial_bandwidth,
            color_bandwidth: self.color_bandwidth,
            pyramid_levels: self.pyramid_levels,
            max_iterations: self.max_iterations,
            convergence_eps: self.convergence_eps,
        }
    }

    /// Parses a config file body on top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got {raw:?}", n + 1))
            })?;
            cfg.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        KEYS.iter()
            .map(|k| format!("{k} = {}\n", self.get(k).expect("known key")))
            .collect()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Unreadable {
            path: path.to_owned(),
            source,
        })?;
        Self::from_text(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::Unwritable {
            path: path.to_owned(),
            reason: e.to_string(),
        })
    }
}

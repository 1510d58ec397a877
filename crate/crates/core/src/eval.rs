//! Jaccard scoring, batch evaluation and reports.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::io::{load_image, load_mask, save_mask};
use crate::morphology::{erode_b, StructuringElement};
use crate::pipeline_meanshift::segment_method2;
use crate::pipeline_watershed::segment_method1;
use crate::raster::{BinaryMask, RgbImage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Watershed,
    MeanShift,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Watershed => "watershed",
            Method::MeanShift => "meanshift",
        }
    }

    /// Label distinguishing runs of the same method: the inpainting method
    /// for watershed, the color mode for mean shift.
    pub fn variant(self, cfg: &PipelineConfig) -> &'static str {
        match self {
            Method::Watershed => cfg.inpaint_method.name(),
            Method::MeanShift => cfg.color_mode.name(),
        }
    }

    pub fn segment(self, img: &RgbImage, cfg: &PipelineConfig) -> Result<BinaryMask> {
        match self {
            Method::Watershed => segment_method1(img, cfg),
            Method::MeanShift => segment_method2(img, cfg),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "watershed" | "method1" => Ok(Method::Watershed),
            "meanshift" | "method2" => Ok(Method::MeanShift),
            other => Err(Error::InvalidParameter(format!(
                "unknown method {other:?} (expected watershed or meanshift)"
            ))),
        }
    }
}

/// `|pred ∩ truth| / |pred ∪ truth|`; two empty masks score 1.
pub fn jaccard(pred: &BinaryMask, truth: &BinaryMask) -> Result<f64> {
    Error::check_dims(truth.dims(), pred.dims())?;
    let (mut inter, mut union) = (0usize, 0usize);
    for (&p, &t) in pred.data().iter().zip(truth.data()) {
        inter += (p && t) as usize;
        union += (p || t) as usize;
    }
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRecord {
    pub image_id: String,
    pub method: Method,
    pub variant: String,
    pub iou: f64,
    /// Wall time of the segmentation, when timing was requested.
    pub runtime_ms: Option<f64>,
    /// Why the image scored 0 without a prediction.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalSummary {
    pub records: Vec<EvalRecord>,
    pub mean_iou: f64,
    pub count: usize,
}

impl EvalSummary {
    /// Sorts records by image id and aggregates them.
    pub fn from_records(mut records: Vec<EvalRecord>) -> Self {
        records.sort_by(|a, b| a.image_id.cmp(&b.image_id));
        let count = records.len();
        let mean_iou = if count == 0 {
            0.0
        } else {
            records.iter().map(|r| r.iou).sum::<f64>() / count as f64
        };
        Self {
            records,
            mean_iou,
            count,
        }
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }
}

#[derive(Clone, Debug, Default)]
pub struct BatchOptions {
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub timings: bool,
    /// Where to write each prediction as `<stem><truth_suffix>.png`.
    pub save_masks: Option<PathBuf>,
}

const IMAGE_EXTENSIONS: [&str; 6] = ["png", "ppm", "pgm", "pnm", "jpg", "jpeg"];

fn read_dir_checked(dir: &Path) -> Result<std::fs::ReadDir> {
    std::fs::read_dir(dir).map_err(|source| Error::Unreadable {
        path: dir.to_owned(),
        source,
    })
}

/// Raster files in `dir` whose stem does not end with `truth_suffix`, sorted.
pub fn list_images(dir: &Path, truth_suffix: &str) -> Result<Vec<PathBuf>> {
    let mut images = Vec::new();
    for entry in read_dir_checked(dir)? {
        let path = entry?.path();
        let Some(ext) = path.extension().and_then(|e| e.to_str()) else {
            continue;
        };
        if !IMAGE_EXTENSIONS.contains(&ext.to_ascii_lowercase().as_str()) || !path.is_file() {
            continue;
        }
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
        if !truth_suffix.is_empty() && stem.ends_with(truth_suffix) {
            continue;
        }
        images.push(path);
    }
    images.sort();
    Ok(images)
}

/// `<stem><suffix>.png`, falling back to `<stem>.png` unless that is the image itself.
pub fn find_truth(truth_dir: &Path, image: &Path, suffix: &str) -> Option<PathBuf> {
    let stem = image.file_stem()?.to_str()?;
    let primary = truth_dir.join(format!("{stem}{suffix}.png"));
    if primary.is_file() {
        return Some(primary);
    }
    let fallback = truth_dir.join(format!("{stem}.png"));
    let same = match (fallback.canonicalize(), image.canonicalize()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    (fallback.is_file() && !same).then_some(fallback)
}

fn evaluate_one(
    image: &Path,
    truth_dir: &Path,
    method: Method,
    cfg: &PipelineConfig,
    opts: &BatchOptions,
) -> EvalRecord {
    let image_id = image
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut runtime_ms = None;
    let outcome = (|| -> Result<f64> {
        let truth_path = find_truth(truth_dir, image, &cfg.truth_suffix)
            .ok_or_else(|| Error::MissingTruth(image_id.clone()))?;
        let img = load_image(image)?;
        let truth = load_mask(&truth_path)?;
        let start = Instant::now();
        let pred = method.segment(&img, cfg);
        if opts.timings {
            runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        let pred = pred?;
        if let Some(dir) = &opts.save_masks {
            save_mask(&pred, dir.join(format!("{image_id}{}.png", cfg.truth_suffix)))?;
        }
        jaccard(&pred, &truth)
    })();
    let (iou, error) = match outcome {
        Ok(iou) => (iou, None),
        Err(e) => (0.0, Some(e.to_string())),
    };
    EvalRecord {
        image_id,
        method,
        variant: method.variant(cfg).to_owned(),
        iou,
        runtime_ms,
        error,
    }
}

/// Segments and scores every image in `image_dir` against `truth_dir`.
///
/// Per-image failures become records with IoU 0 and an error note; only
/// unusable directories abort the batch.
pub fn evaluate_batch(
    image_dir: &Path,
    truth_dir: &Path,
    method: Method,
    cfg: &PipelineConfig,
    opts: &BatchOptions,
) -> Result<EvalSummary> {
    cfg.validate()?;
    let images = list_images(image_dir, &cfg.truth_suffix)?;
    if images.is_empty() {
        return Err(Error::EmptyDirectory(image_dir.to_owned()));
    }
    read_dir_checked(truth_dir)?;
    if let Some(dir) = &opts.save_masks {
        std::fs::create_dir_all(dir).map_err(|e| Error::Unwritable {
            path: dir.clone(),
            reason: e.to_string(),
        })?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let records = pool.install(|| {
        images
            .par_iter()
            .map(|img| evaluate_one(img, truth_dir, method, cfg, opts))
            .collect::<Vec<_>>()
    });
    Ok(EvalSummary::from_records(records))
}

/// Report as CSV text: one row per record and a closing `MEAN` row.
pub fn report_csv(summary: &EvalSummary) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let to_io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["image_id", "method", "variant", "iou", "runtime_ms", "error"])
        .map_err(to_io)?;
    for r in &summary.records {
        w.write_record([
            r.image_id.as_str(),
            r.method.name(),
            r.variant.as_str(),
            &r.iou.to_string(),
            &r.runtime_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
            r.error.as_deref().unwrap_or(""),
        ])
        .map_err(to_io)?;
    }
    w.write_record(["MEAN", "", "", &summary.mean_iou.to_string(), "", ""])
        .map_err(to_io)?;
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV built from UTF-8 fields"))
}

pub fn write_report(summary: &EvalSummary, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, report_csv(summary)?).map_err(|e| Error::Unwritable {
        path: path.to_owned(),
        reason: e.to_string(),
    })
}

/// Pixels of `mask` removed by a disk(1) erosion.
pub fn boundary(mask: &BinaryMask) -> BinaryMask {
    mask.zip_map(&erode_b(mask, &StructuringElement::disk(1)), |m, e| m && !e)
        .expect("same dimensions")
}

pub const PREDICTION_COLOR: [u8; 3] = [0, 255, 0];
pub const TRUTH_COLOR: [u8; 3] = [255, 0, 0];

/// Draws the truth boundary in red, then the prediction boundary in green.
pub fn render_overlay(
    img: &RgbImage,
    pred: &BinaryMask,
    truth: Option<&BinaryMask>,
) -> Result<RgbImage> {
    Error::check_dims(img.dims(), pred.dims())?;
    let mut out = img.clone();
    let mut paint = |mask: &BinaryMask, color: [u8; 3]| {
        for y in 0..mask.height() {
            for x in 0..mask.width() {
                if mask.get(x, y) {
                    out.set(x, y, color);
                }
            }
        }
    };
    if let Some(truth) = truth {
        Error::check_dims(img.dims(), truth.dims())?;
        paint(&boundary(truth), TRUTH_COLOR);
    }
    paint(&boundary(pred), PREDICTION_COLOR);
    Ok(out)
}

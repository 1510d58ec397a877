//! Method 1: hair removal followed by marker-controlled watershed.

use std::collections::VecDeque;

use crate::config::{PipelineConfig, TophatPolarity};
use crate::distance::edt;
use crate::error::{Error, Result};
use crate::filters::median_filter_rgb;
use crate::inpaint::inpaint_rgb;
use crate::labels::{connected_components, largest_component};
use crate::morphology::{
    black_tophat, close_b, dilate_b, gradient, open_b, white_tophat, StructuringElement,
};
use crate::raster::{rgb_to_gray, split_channels, BinaryMask, GrayImage, LabelMap, RgbImage};
use crate::threshold::{apply_threshold, histogram, otsu_threshold, Polarity};

/// Top-hat response of one plane with the configured polarity and radius.
pub fn hair_response(plane: &GrayImage, cfg: &PipelineConfig) -> GrayImage {
    let se = StructuringElement::disk(cfg.tophat_radius);
    match cfg.tophat_polarity {
        TophatPolarity::Black => black_tophat(plane, &se),
        TophatPolarity::White => white_tophat(plane, &se),
    }
}

/// Binarizes a top-hat response and consolidates it into a hair mask:
/// `response > hair_threshold`, then binary closing and dilation.
pub fn hair_mask_from_response(response: &GrayImage, cfg: &PipelineConfig) -> BinaryMask {
    let raw = response.map(|v| v > cfg.hair_threshold);
    if raw.is_blank() {
        return raw;
    }
    let closed = close_b(&raw, &StructuringElement::disk(cfg.hair_close_radius));
    dilate_b(&closed, &StructuringElement::disk(cfg.hair_dilate_radius))
}

/// Hair mask of a color image: the per-pixel maximum of the channel top-hats,
/// binarized and consolidated by [`hair_mask_from_response`].
pub fn build_hair_mask(img: &RgbImage, cfg: &PipelineConfig) -> BinaryMask {
    let [r, g, b] = split_channels(img).map(|p| hair_response(&p, cfg));
    let response = GrayImage::from_fn(img.width(), img.height(), |x, y| {
        r.get(x, y).max(g.get(x, y)).max(b.get(x, y))
    });
    hair_mask_from_response(&response, cfg)
}

/// Seeds for the watershed flood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkerSet {
    pub sure_foreground: BinaryMask,
    pub sure_background: BinaryMask,
    pub unknown: BinaryMask,
    /// 1 on sure background, `2..=k+1` on the sure-foreground components,
    /// 0 on unknown pixels.
    pub markers: LabelMap,
}

impl MarkerSet {
    /// Number of distinct positive labels.
    pub fn label_count(&self) -> usize {
        let mut seen = std::collections::BTreeSet::new();
        seen.extend(self.markers.data().iter().copied().filter(|&l| l > 0));
        seen.len()
    }
}

/// Builds watershed markers from a binarized lesion candidate.
///
/// The candidate is opened then closed; sure background is everything outside
/// its dilation, sure foreground is where its distance transform exceeds
/// `fg_dist_fraction` of the maximum.
pub fn create_markers(lesion: &BinaryMask, cfg: &PipelineConfig) -> Result<MarkerSet> {
    let clean_se = StructuringElement::disk(cfg.marker_clean_radius);
    let cleaned = close_b(&open_b(lesion, &clean_se), &clean_se);
    if cleaned.is_blank() {
        return Err(Error::NoLesionCandidate);
    }
    let sure_background =
        dilate_b(&cleaned, &StructuringElement::disk(cfg.bg_dilate_radius)).invert();
    let dist = edt(&cleaned);
    let max = dist.data().iter().copied().fold(0.0, f64::max);
    let cut = cfg.fg_dist_fraction * max;
    let sure_foreground = dist.map(|d| d > cut);
    let unknown = sure_foreground
        .zip_map(&sure_background, |f, b| !(f || b))
        .expect("same dimensions");

    let (components, _) = connected_components(&sure_foreground);
    let markers = components
        .zip_map(&sure_background, |l, bg| match (l, bg) {
            (0, true) => 1,
            (0, false) => 0,
            (l, _) => l + 1,
        })
        .expect("same dimensions");
    Ok(MarkerSet {
        sure_foreground,
        sure_background,
        unknown,
        markers,
    })
}

/// Marker-controlled watershed by priority flooding.
///
/// Unlabeled neighbors of marked pixels are queued by relief value (FIFO
/// within a level). A popped pixel takes the label shared by all its labeled
/// 4-neighbors and queues its own unlabeled neighbors; a pixel whose labeled
/// neighbors disagree becomes a `-1` boundary. Marked pixels keep their
/// labels, and any pixel the flood cannot reach ends as a boundary.
pub fn watershed(relief: &GrayImage, markers: &LabelMap) -> Result<LabelMap> {
    Error::check_dims(relief.dims(), markers.dims())?;
    let distinct: std::collections::BTreeSet<i32> =
        markers.data().iter().copied().filter(|&l| l > 0).collect();
    if distinct.len() < 2 {
        return Err(Error::TooFewMarkers(distinct.len()));
    }

    let (w, h) = relief.dims();
    let mut labels = markers.map(|l| l.max(0));
    let mut queued = vec![false; w * h];
    let mut buckets: Vec<VecDeque<usize>> = vec![VecDeque::new(); 256];
    let mut lowest = 256usize;

    let neighbors = |i: usize| {
        let (x, y) = (i % w, i / w);
        [
            (x > 0).then(|| i - 1),
            (x + 1 < w).then(|| i + 1),
            (y > 0).then(|| i - w),
            (y + 1 < h).then(|| i + w),
        ]
        .into_iter()
        .flatten()
    };

    let push = |i: usize,
                    queued: &mut Vec<bool>,
                    buckets: &mut Vec<VecDeque<usize>>,
                    lowest: &mut usize| {
        queued[i] = true;
        let level = relief.data()[i] as usize;
        buckets[level].push_back(i);
        *lowest = (*lowest).min(level);
    };

    for i in 0..w * h {
        if labels.data()[i] > 0 {
            for n in neighbors(i) {
                if labels.data()[n] == 0 && !queued[n] {
                    push(n, &mut queued, &mut buckets, &mut lowest);
                }
            }
        }
    }

    while lowest < 256 {
        let Some(i) = buckets[lowest].pop_front() else {
            lowest += 1;
            continue;
        };
        let mut agreed = 0i32;
        let mut conflict = false;
        for n in neighbors(i) {
            let l = labels.data()[n];
            if l > 0 {
                if agreed == 0 {
                    agreed = l;
                } else if agreed != l {
                    conflict = true;
                }
            }
        }
        if conflict || agreed == 0 {
            labels.data_mut()[i] = -1;
            continue;
        }
        labels.data_mut()[i] = agreed;
        for n in neighbors(i) {
            if labels.data()[n] == 0 && !queued[n] {
                push(n, &mut queued, &mut buckets, &mut lowest);
            }
        }
    }

    for l in labels.data_mut() {
        if *l == 0 {
            *l = -1;
        }
    }
    Ok(labels)
}

/// Method 1 end to end; returns the lesion mask.
pub fn segment_method1(img: &RgbImage, cfg: &PipelineConfig) -> Result<BinaryMask> {
    cfg.validate()?;
    let filtered = median_filter_rgb(img, cfg.median_radius);
    let hair = build_hair_mask(&filtered, cfg);
    let hairless = if hair.is_blank() {
        filtered
    } else {
        inpaint_rgb(
            &filtered,
            &hair,
            cfg.inpaint_method,
            cfg.inpaint_radius,
            cfg.diffusion_iterations,
        )?
    };
    let gray = rgb_to_gray(&hairless);
    let t = otsu_threshold(&histogram(&gray))?;
    let candidate = apply_threshold(&gray, t, Polarity::ForegroundBelow);
    if candidate.count() == candidate.len() {
        // A single-class image: nothing darker than its surroundings.
        return Err(Error::NoLesionCandidate);
    }
    let markers = create_markers(&candidate, cfg)?;

    let region = if markers.sure_background.is_blank() {
        // The dilated lesion covers the frame: there is no background to flood from.
        close_b(
            &open_b(&candidate, &StructuringElement::disk(cfg.marker_clean_radius)),
            &StructuringElement::disk(cfg.marker_clean_radius),
        )
    } else {
        let relief = gradient(&gray, &StructuringElement::disk(1));
        let flooded = watershed(&relief, &markers.markers)?;
        flooded.map(|l| l == -1 || l >= 2)
    };
    let lesion = largest_component(&region);
    if lesion.is_blank() {
        return Err(Error::NoLesionCandidate);
    }
    Ok(lesion)
}

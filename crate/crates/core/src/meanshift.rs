//! Joint spatial/range mean-shift filtering with a coarse-to-fine pyramid.
//!
//! Windows are rectangular in both domains: a pixel contributes to the
//! current estimate when it lies within `spatial_bandwidth` (Chebyshev) of
//! the estimated position and within `color_bandwidth` (L∞ over channels) of
//! the estimated color.

use rayon::prelude::*;

use crate::morphology::{dilate_b, StructuringElement};
use crate::raster::{BinaryMask, RgbImage};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanShiftParams {
    pub spatial_bandwidth: usize,
    pub color_bandwidth: f64,
    pub pyramid_levels: usize,
    pub max_iterations: usize,
    pub convergence_eps: f64,
}

impl Default for MeanShiftParams {
    fn default() -> Self {
        Self {
            spatial_bandwidth: 21,
            color_bandwidth: 40.0,
            pyramid_levels: 2,
            max_iterations: 10,
            convergence_eps: 1.0,
        }
    }
}

/// Pyramid levels stop once a side would drop below this.
const MIN_LEVEL_SIDE: usize = 8;

/// Seeks the joint-domain mode starting from pixel `(x, y)` with color `start`.
fn seek_mode(img: &RgbImage, x: usize, y: usize, start: [f64; 3], p: &MeanShiftParams) -> [f64; 3] {
    let (w, h) = img.dims();
    let data = img.data();
    let sp = p.spatial_bandwidth as isize;
    let sr = p.color_bandwidth;
    let (mut cx, mut cy) = (x as f64, y as f64);
    let mut color = start;
    for _ in 0..p.max_iterations.max(1) {
        let (ix, iy) = (cx.round() as isize, cy.round() as isize);
        let x0 = (ix - sp).max(0) as usize;
        let x1 = (ix + sp).min(w as isize - 1) as usize;
        let y0 = (iy - sp).max(0) as usize;
        let y1 = (iy + sp).min(h as isize - 1) as usize;
        let (mut n, mut sx, mut sy) = (0u64, 0u64, 0u64);
        let mut sc = [0u64; 3];
        for qy in y0..=y1 {
            let row = &data[3 * (qy * w + x0)..3 * (qy * w + x1 + 1)];
            for (k, px) in row.chunks_exact(3).enumerate() {
                if (px[0] as f64 - color[0]).abs() <= sr
                    && (px[1] as f64 - color[1]).abs() <= sr
                    && (px[2] as f64 - color[2]).abs() <= sr
                {
                    n += 1;
                    sx += (x0 + k) as u64;
                    sy += qy as u64;
                    sc[0] += px[0] as u64;
                    sc[1] += px[1] as u64;
                    sc[2] += px[2] as u64;
                }
            }
        }
        if n == 0 {
            break;
        }
        let nf = n as f64;
        let (nx, ny) = (sx as f64 / nf, sy as f64 / nf);
        let next = [sc[0] as f64 / nf, sc[1] as f64 / nf, sc[2] as f64 / nf];
        let shift = (nx - cx)
            .abs()
            .max((ny - cy).abs())
            .max((0..3).map(|c| (next[c] - color[c]).abs()).fold(0.0, f64::max));
        cx = nx;
        cy = ny;
        color = next;
        if shift < p.convergence_eps {
            break;
        }
    }
    color
}

fn to_u8(c: [f64; 3]) -> [u8; 3] {
    c.map(|v| v.round().clamp(0.0, 255.0) as u8)
}

fn as_f64(c: [u8; 3]) -> [f64; 3] {
    c.map(|v| v as f64)
}

/// Filters every pixel selected by `select`; the rest take `fallback`.
fn filter_level(
    src: &RgbImage,
    p: &MeanShiftParams,
    fallback: Option<&RgbImage>,
    select: impl Fn(usize, usize) -> bool + Sync,
) -> RgbImage {
    let (w, h) = src.dims();
    let rows: Vec<Vec<u8>> = (0..h)
        .into_par_iter()
        .map(|y| {
            let mut row = Vec::with_capacity(3 * w);
            for x in 0..w {
                let px = if select(x, y) {
                    to_u8(seek_mode(src, x, y, as_f64(src.get(x, y)), p))
                } else {
                    fallback.expect("fallback for unselected pixels").get(x, y)
                };
                row.extend_from_slice(&px);
            }
            row
        })
        .collect();
    RgbImage::from_vec(w, h, rows.concat()).expect("dimensions preserved")
}

/// 2×2 box average; odd trailing rows/columns are averaged with themselves.
fn downsample(img: &RgbImage) -> RgbImage {
    let (w, h) = img.dims();
    let (cw, ch) = (w.div_ceil(2), h.div_ceil(2));
    RgbImage::from_fn(cw, ch, |x, y| {
        let xs = [2 * x, (2 * x + 1).min(w - 1)];
        let ys = [2 * y, (2 * y + 1).min(h - 1)];
        let mut sum = [0u32; 3];
        for &sy in &ys {
            for &sx in &xs {
                let px = img.get(sx, sy);
                for c in 0..3 {
                    sum[c] += px[c] as u32;
                }
            }
        }
        sum.map(|s| ((s + 2) / 4) as u8)
    })
}

fn upsample(coarse: &RgbImage, width: usize, height: usize) -> RgbImage {
    RgbImage::from_fn(width, height, |x, y| coarse.get(x / 2, y / 2))
}

fn linf(a: [u8; 3], b: [u8; 3]) -> f64 {
    (0..3)
        .map(|c| (a[c] as f64 - b[c] as f64).abs())
        .fold(0.0, f64::max)
}

/// Mean-shift filtered copy of `img`: each pixel takes the color of the mode
/// its joint (position, color) estimate converges to.
///
/// With `pyramid_levels > 0` the image is first filtered on 2× box-downsampled
/// levels; a finer pixel is refiltered only when the upsampled coarse color is
/// more than `color_bandwidth` away from its own color or from a 4-neighbor's
/// upsampled color (or sits next to such a pixel), and otherwise inherits the
/// coarse result.
pub fn mean_shift_filter(img: &RgbImage, p: &MeanShiftParams) -> RgbImage {
    let mut pyramid = vec![img.clone()];
    for _ in 0..p.pyramid_levels {
        let last = pyramid.last().unwrap();
        if last.width() / 2 < MIN_LEVEL_SIDE || last.height() / 2 < MIN_LEVEL_SIDE {
            break;
        }
        pyramid.push(downsample(last));
    }

    let coarsest = pyramid.last().unwrap();
    let mut result = filter_level(coarsest, p, None, |_, _| true);
    for src in pyramid.iter().rev().skip(1) {
        let (w, h) = src.dims();
        let up = upsample(&result, w, h);
        let sr = p.color_bandwidth;
        let needs_refilter = |x: usize, y: usize| {
            let here = up.get(x, y);
            if linf(here, src.get(x, y)) > sr {
                return true;
            }
            let neighbors = [
                (x.wrapping_sub(1), y),
                (x + 1, y),
                (x, y.wrapping_sub(1)),
                (x, y + 1),
            ];
            neighbors
                .into_iter()
                .filter(|&(nx, ny)| nx < w && ny < h)
                .any(|(nx, ny)| linf(here, up.get(nx, ny)) > sr)
        };
        let flagged = BinaryMask::from_fn(w, h, needs_refilter);
        let grown = dilate_b(&flagged, &StructuringElement::square(3));
        result = filter_level(src, p, Some(&up), |x, y| grown.get(x, y));
    }
    result
}

//! Flat grayscale and binary morphology.
//!
//! Both supported structuring elements are unions of horizontal runs that are
//! symmetric about the anchor column, so every operator is computed from
//! per-row sliding extrema of each run half-width followed by a vertical fold
//! over the runs. Samples outside the image use edge replication.

use crate::raster::{BinaryMask, GrayImage, Raster};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// All offsets with `dx² + dy² ≤ r²`.
    Disk(usize),
    /// All offsets with `|dx|, |dy| ≤ ⌊side / 2⌋`.
    Square(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuringElement {
    shape: Shape,
    /// `(dy, half_width)`: the row `dy` covers `dx ∈ [-half_width, half_width]`.
    runs: Vec<(isize, usize)>,
}

impl StructuringElement {
    pub fn disk(radius: usize) -> Self {
        let r = radius as isize;
        let runs = (-r..=r)
            .map(|dy| {
                let rem = (r * r - dy * dy) as usize;
                // Largest w with w² ≤ rem.
                let mut w = (rem as f64).sqrt() as usize;
                while w * w > rem {
                    w -= 1;
                }
                while (w + 1) * (w + 1) <= rem {
                    w += 1;
                }
                (dy, w)
            })
            .collect();
        Self {
            shape: Shape::Disk(radius),
            runs,
        }
    }

    /// Square of the given side; even sides behave like `side + 1`.
    pub fn square(side: usize) -> Self {
        let half = (side / 2) as isize;
        let runs = (-half..=half).map(|dy| (dy, half as usize)).collect();
        Self {
            shape: Shape::Square(side),
            runs,
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn runs(&self) -> &[(isize, usize)] {
        &self.runs
    }

    /// Every `(dx, dy)` displacement covered by the element.
    pub fn offsets(&self) -> Vec<(isize, isize)> {
        self.runs
            .iter()
            .flat_map(|&(dy, w)| {
                let w = w as isize;
                (-w..=w).map(move |dx| (dx, dy))
            })
            .collect()
    }

    /// Largest |dx| or |dy| in the element.
    pub fn extent(&self) -> usize {
        self.runs
            .iter()
            .map(|&(dy, w)| w.max(dy.unsigned_abs()))
            .max()
            .unwrap_or(0)
    }
}

/// Sliding extremum of one row for each requested half-width.
///
/// `levels[w]` is filled only when `wanted[w]` is set.
fn row_extrema<T: Copy + Ord>(
    row: &[T],
    wanted: &[bool],
    pick: fn(T, T) -> T,
    levels: &mut [Vec<T>],
) {
    let n = row.len() as isize;
    let at = |i: isize| row[i.clamp(0, n - 1) as usize];
    let mut current = row.to_vec();
    for (w, want) in wanted.iter().enumerate() {
        if w > 0 {
            let w = w as isize;
            for (x, v) in current.iter_mut().enumerate() {
                let x = x as isize;
                *v = pick(*v, pick(at(x - w), at(x + w)));
            }
        }
        if *want {
            levels[w].clone_from(&current);
        }
    }
}

fn rank_filter<T: Copy + Ord + Default>(
    img: &Raster<T>,
    se: &StructuringElement,
    pick: fn(T, T) -> T,
) -> Raster<T> {
    let (width, height) = img.dims();
    let max_w = se.runs.iter().map(|r| r.1).max().unwrap_or(0);
    let mut wanted = vec![false; max_w + 1];
    for &(_, w) in &se.runs {
        wanted[w] = true;
    }
    let reach = se.runs.iter().map(|r| r.0.unsigned_abs()).max().unwrap_or(0);

    // Per-row tables, computed lazily and released once no output row needs them.
    let mut tables: Vec<Option<Vec<Vec<T>>>> = vec![None; height];
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        let lo = y.saturating_sub(reach);
        let hi = (y + reach).min(height - 1);
        for (ry, slot) in tables.iter_mut().enumerate().take(hi + 1).skip(lo) {
            if slot.is_none() {
                let mut levels = vec![Vec::new(); max_w + 1];
                row_extrema(img.row(ry), &wanted, pick, &mut levels);
                *slot = Some(levels);
            }
        }
        if lo > 0 {
            tables[lo - 1] = None;
        }
        let start = out.len();
        out.resize(start + width, T::default());
        let row_out = &mut out[start..];
        let mut first = true;
        for &(dy, w) in &se.runs {
            let ry = (y as isize + dy).clamp(0, height as isize - 1) as usize;
            let src = &tables[ry].as_ref().expect("row table present")[w];
            if first {
                row_out.copy_from_slice(src);
                first = false;
            } else {
                for (o, &s) in row_out.iter_mut().zip(src) {
                    *o = pick(*o, s);
                }
            }
        }
    }
    Raster::from_vec(width, height, out).expect("dimensions preserved")
}

pub fn erode(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    rank_filter(img, se, std::cmp::min)
}

pub fn dilate(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    rank_filter(img, se, std::cmp::max)
}

pub fn open(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    dilate(&erode(img, se), se)
}

pub fn close(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    erode(&dilate(img, se), se)
}

/// `img - open(img)`: thin bright structures.
pub fn white_tophat(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    img.zip_map(&open(img, se), |a, b| a.saturating_sub(b))
        .expect("same dimensions")
}

/// `close(img) - img`: thin dark structures.
pub fn black_tophat(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    close(img, se)
        .zip_map(img, |a, b| a.saturating_sub(b))
        .expect("same dimensions")
}

/// `dilate(img) - erode(img)`.
pub fn gradient(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    dilate(img, se)
        .zip_map(&erode(img, se), |a, b| a - b)
        .expect("same dimensions")
}

pub fn erode_b(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    rank_filter(mask, se, std::cmp::min)
}

pub fn dilate_b(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    rank_filter(mask, se, std::cmp::max)
}

pub fn open_b(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    dilate_b(&erode_b(mask, se), se)
}

pub fn close_b(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    erode_b(&dilate_b(mask, se), se)
}

//! Dense raster types shared by every stage of the pipelines.
//!
//! All rasters are row-major with at least one row and one column. Single
//! channel data lives in [`Raster`], aliased per element type; interleaved
//! color lives in [`RgbImage`].

use crate::error::{Error, Result};

/// A row-major single-channel raster.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Raster<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// 8-bit intensities.
pub type GrayImage = Raster<u8>;
/// Foreground (`true`) / background raster.
pub type BinaryMask = Raster<bool>;
/// Non-negative real field (distances, arrival times).
pub type FloatImage = Raster<f64>;
/// Signed labels: `-1` boundary, `0` unknown/background, `>= 1` region id.
pub type LabelMap = Raster<i32>;

impl<T: Copy> Raster<T> {
    /// Creates a raster filled with `value`.
    ///
    /// Panics if either dimension is zero.
    pub fn new(width: usize, height: usize, value: T) -> Self {
        assert!(width > 0 && height > 0, "raster dimensions must be non-zero");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "raster dimensions must be non-zero, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "{width}x{height} raster needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(width > 0 && height > 0, "raster dimensions must be non-zero");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false: rasters have at least one pixel.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[self.index(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        let i = self.index(x, y);
        self.data[i] = value;
    }

    /// Sample with edge replication for out-of-range coordinates.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> T {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, y: usize) -> &[T] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(T) -> U) -> Raster<U> {
        Raster {
            width: self.width,
            height: self.height,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    /// Combines two same-sized rasters pixelwise.
    pub fn zip_map<U: Copy, V: Copy>(
        &self,
        other: &Raster<U>,
        mut f: impl FnMut(T, U) -> V,
    ) -> Result<Raster<V>> {
        Error::check_dims(self.dims(), other.dims())?;
        Ok(Raster {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// 4-connected in-bounds neighbors of `(x, y)`.
    pub fn neighbors4(&self, x: usize, y: usize) -> impl Iterator<Item = (usize, usize)> {
        let (w, h) = (self.width, self.height);
        let candidates = [
            (x.wrapping_sub(1), y),
            (x + 1, y),
            (x, y.wrapping_sub(1)),
            (x, y + 1),
        ];
        candidates
            .into_iter()
            .filter(move |&(nx, ny)| nx < w && ny < h)
    }

    /// 8-connected in-bounds neighbors of `(x, y)`.
    pub fn neighbors8(&self, x: usize, y: usize) -> impl Iterator<Item = (usize, usize)> {
        let (w, h) = (self.width as isize, self.height as isize);
        let (x, y) = (x as isize, y as isize);
        (-1..=1)
            .flat_map(move |dy| (-1..=1).map(move |dx| (dx, dy)))
            .filter(|&(dx, dy)| dx != 0 || dy != 0)
            .map(move |(dx, dy)| (x + dx, y + dy))
            .filter(move |&(nx, ny)| nx >= 0 && ny >= 0 && nx < w && ny < h)
            .map(|(nx, ny)| (nx as usize, ny as usize))
    }
}

impl BinaryMask {
    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn is_blank(&self) -> bool {
        !self.data.iter().any(|&v| v)
    }

    pub fn invert(&self) -> BinaryMask {
        self.map(|v| !v)
    }

    /// Embeds the mask as a 0/255 gray image.
    pub fn to_gray(&self) -> GrayImage {
        self.map(|v| if v { 255 } else { 0 })
    }

    /// Foreground is every non-zero pixel.
    pub fn from_gray(img: &GrayImage) -> BinaryMask {
        img.map(|v| v > 0)
    }
}

/// Interleaved 8-bit RGB raster.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, color: [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "raster dimensions must be non-zero");
        let mut data = Vec::with_capacity(3 * width * height);
        for _ in 0..width * height {
            data.extend_from_slice(&color);
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "raster dimensions must be non-zero, got {width}x{height}"
            )));
        }
        if data.len() != 3 * width * height {
            return Err(Error::InvalidParameter(format!(
                "{width}x{height} RGB image needs {} bytes, got {}",
                3 * width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "raster dimensions must be non-zero");
        let mut data = Vec::with_capacity(3 * width * height);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, px: [u8; 3]) {
        let i = 3 * (y * self.width + x);
        self.data[i..i + 3].copy_from_slice(&px);
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.data
    }

    pub fn pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data.chunks_exact(3).map(|c| [c[0], c[1], c[2]])
    }

    pub fn map(&self, f: impl Fn([u8; 3]) -> [u8; 3]) -> RgbImage {
        let mut data = Vec::with_capacity(self.data.len());
        for px in self.pixels() {
            data.extend_from_slice(&f(px));
        }
        RgbImage {
            width: self.width,
            height: self.height,
            data,
        }
    }
}

/// BT.601 luma of one pixel, rounded half up.
#[inline]
pub fn luma([r, g, b]: [u8; 3]) -> u8 {
    // Integer weights scaled by 1000 keep the rounding exact.
    let sum = 299 * r as u32 + 587 * g as u32 + 114 * b as u32;
    ((sum + 500) / 1000).min(255) as u8
}

pub fn rgb_to_gray(img: &RgbImage) -> GrayImage {
    let data = img.pixels().map(luma).collect();
    Raster {
        width: img.width,
        height: img.height,
        data,
    }
}

pub fn gray_to_rgb(img: &GrayImage) -> RgbImage {
    let data = img.data().iter().flat_map(|&v| [v, v, v]).collect();
    RgbImage {
        width: img.width,
        height: img.height,
        data,
    }
}

pub fn split_channels(img: &RgbImage) -> [GrayImage; 3] {
    std::array::from_fn(|c| Raster {
        width: img.width,
        height: img.height,
        data: img.data.iter().skip(c).step_by(3).copied().collect(),
    })
}

pub fn merge_channels(r: &GrayImage, g: &GrayImage, b: &GrayImage) -> Result<RgbImage> {
    Error::check_dims(r.dims(), g.dims())?;
    Error::check_dims(r.dims(), b.dims())?;
    let data = r
        .data()
        .iter()
        .zip(g.data())
        .zip(b.data())
        .flat_map(|((&r, &g), &b)| [r, g, b])
        .collect();
    Ok(RgbImage {
        width: r.width,
        height: r.height,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luma_reference_values() {
        assert_eq!(luma([255, 255, 255]), 255);
        assert_eq!(luma([0, 0, 0]), 0);
        // 29.9 + 88.05 + 22.8 = 140.75
        assert_eq!(luma([100, 150, 200]), 141);
    }

    #[test]
    fn gray_replication_is_inverted_by_luma() {
        for g in 0..=255u8 {
            assert_eq!(luma([g, g, g]), g);
        }
        let img = GrayImage::from_fn(3, 2, |x, y| (x * 40 + y * 7) as u8);
        let rgb = gray_to_rgb(&img);
        assert_eq!(rgb.dims(), (3, 2));
        assert_eq!(rgb.get(1, 1), [47, 47, 47]);
        assert_eq!(rgb_to_gray(&rgb), img);
    }

    #[test]
    fn split_uniform_and_single_pixel() {
        let img = RgbImage::new(4, 3, [1, 2, 3]);
        let [r, g, b] = split_channels(&img);
        assert!(r.data().iter().all(|&v| v == 1));
        assert!(g.data().iter().all(|&v| v == 2));
        assert!(b.data().iter().all(|&v| v == 3));

        let one = RgbImage::new(1, 1, [9, 8, 7]);
        let [r, g, b] = split_channels(&one);
        assert_eq!((r.get(0, 0), g.get(0, 0), b.get(0, 0)), (9, 8, 7));
    }

    #[test]
    fn merge_rejects_mismatched_planes() {
        let a = GrayImage::new(2, 2, 0);
        let b = GrayImage::new(3, 2, 0);
        assert!(matches!(
            merge_channels(&a, &a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn from_vec_validates_length_and_dims() {
        assert!(GrayImage::from_vec(2, 2, vec![0; 3]).is_err());
        assert!(GrayImage::from_vec(0, 2, vec![]).is_err());
        assert!(RgbImage::from_vec(1, 1, vec![0; 2]).is_err());
        assert!(BinaryMask::from_vec(2, 1, vec![true, false]).is_ok());
    }

    #[test]
    fn neighbor_iterators_respect_bounds() {
        let img = GrayImage::new(3, 3, 0);
        assert_eq!(img.neighbors4(0, 0).count(), 2);
        assert_eq!(img.neighbors4(1, 1).count(), 4);
        assert_eq!(img.neighbors8(0, 0).count(), 3);
        assert_eq!(img.neighbors8(1, 1).count(), 8);
        assert_eq!(img.neighbors8(2, 1).count(), 5);
    }
}

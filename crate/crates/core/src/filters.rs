//! Rank-order (median) filtering with edge replication.

use crate::raster::{merge_channels, split_channels, GrayImage, RgbImage};

/// Two-level 256-bin histogram: 16 coarse bins speed up the rank search.
struct RankHistogram {
    fine: [u32; 256],
    coarse: [u32; 16],
}

impl RankHistogram {
    fn new() -> Self {
        Self {
            fine: [0; 256],
            coarse: [0; 16],
        }
    }

    #[inline]
    fn add(&mut self, v: u8) {
        self.fine[v as usize] += 1;
        self.coarse[(v >> 4) as usize] += 1;
    }

    #[inline]
    fn remove(&mut self, v: u8) {
        self.fine[v as usize] -= 1;
        self.coarse[(v >> 4) as usize] -= 1;
    }

    /// Value of the sample at zero-based `rank` in sorted order.
    fn nth(&self, mut rank: u32) -> u8 {
        let mut bucket = 0;
        while self.coarse[bucket] <= rank {
            rank -= self.coarse[bucket];
            bucket += 1;
        }
        let mut v = bucket * 16;
        while self.fine[v] <= rank {
            rank -= self.fine[v];
            v += 1;
        }
        v as u8
    }
}

/// Median of the `(2r+1)²` window around each pixel; radius 0 is the identity.
pub fn median_filter_gray(img: &GrayImage, radius: usize) -> GrayImage {
    if radius == 0 {
        return img.clone();
    }
    let (width, height) = img.dims();
    let r = radius as isize;
    let side = 2 * radius + 1;
    let middle = (side * side / 2) as u32;
    let mut out = img.clone();
    let column = |hist: &mut RankHistogram, x: isize, y: isize, add: bool| {
        for dy in -r..=r {
            let v = img.get_clamped(x, y + dy);
            if add {
                hist.add(v)
            } else {
                hist.remove(v)
            }
        }
    };
    for y in 0..height as isize {
        let mut hist = RankHistogram::new();
        for dx in -r..=r {
            column(&mut hist, dx, y, true);
        }
        out.set(0, y as usize, hist.nth(middle));
        for x in 1..width as isize {
            column(&mut hist, x - r - 1, y, false);
            column(&mut hist, x + r, y, true);
            out.set(x as usize, y as usize, hist.nth(middle));
        }
    }
    out
}

/// Channel-wise median.
pub fn median_filter_rgb(img: &RgbImage, radius: usize) -> RgbImage {
    let [r, g, b] = split_channels(img);
    merge_channels(
        &median_filter_gray(&r, radius),
        &median_filter_gray(&g, radius),
        &median_filter_gray(&b, radius),
    )
    .expect("planes share dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn salt_pixel_is_removed() {
        let mut img = GrayImage::new(5, 5, 0);
        img.set(2, 2, 255);
        assert_eq!(median_filter_gray(&img, 1), GrayImage::new(5, 5, 0));
    }

    #[test]
    fn constant_and_identity_cases() {
        let img = GrayImage::new(6, 4, 77);
        for r in 0..4 {
            assert_eq!(median_filter_gray(&img, r), img);
        }
        let noisy = GrayImage::from_fn(7, 5, |x, y| ((x * 37 + y * 91) % 256) as u8);
        assert_eq!(median_filter_gray(&noisy, 0), noisy);
    }

    #[test]
    fn rgb_salt_removed_in_every_channel() {
        let mut img = RgbImage::new(5, 5, [10, 20, 30]);
        img.set(2, 2, [255, 255, 255]);
        assert_eq!(median_filter_rgb(&img, 1), RgbImage::new(5, 5, [10, 20, 30]));
    }

    #[test]
    fn rank_histogram_nth() {
        let mut h = RankHistogram::new();
        for v in [5u8, 200, 17, 17, 90] {
            h.add(v);
        }
        assert_eq!(h.nth(0), 5);
        assert_eq!(h.nth(2), 17);
        assert_eq!(h.nth(4), 200);
        h.remove(17);
        assert_eq!(h.nth(2), 90);
    }
}

//! Deterministic synthetic dermoscopy-like images with exact ground truth.
//!
//! Each case is a dark elliptical lesion (gray level 40–90) on a bright skin
//! field (180–220) with per-channel Gaussian texture noise of σ = 8.
//! Optional extras are dark hair strokes and a dark circular vignette, as left
//! by a dermoscope's field of view. The truth mask is the rasterized ellipse.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::io::{save_mask, save_rgb};
use crate::raster::{BinaryMask, RgbImage};

pub const NOISE_SIGMA: f64 = 8.0;
pub const HAIR_STROKES: usize = 20;
/// Stroke chord length range as a fraction of the shorter image side.
pub const HAIR_LENGTH: (f64, f64) = (0.15, 0.4);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthOptions {
    pub width: usize,
    pub height: usize,
    pub hair: bool,
    pub vignette: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self {
            width: 256,
            height: 256,
            hair: false,
            vignette: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipse {
    pub cx: f64,
    pub cy: f64,
    /// Semi-major axis.
    pub a: f64,
    /// Semi-minor axis.
    pub b: f64,
    pub theta: f64,
}

impl Ellipse {
    /// Whether the center of pixel `(x, y)` lies inside.
    pub fn contains(&self, x: usize, y: usize) -> bool {
        let (px, py) = (x as f64 + 0.5 - self.cx, y as f64 + 0.5 - self.cy);
        let (s, c) = self.theta.sin_cos();
        let u = px * c + py * s;
        let v = -px * s + py * c;
        (u / self.a).powi(2) + (v / self.b).powi(2) <= 1.0
    }

    pub fn rasterize(&self, width: usize, height: usize) -> BinaryMask {
        BinaryMask::from_fn(width, height, |x, y| self.contains(x, y))
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticCase {
    pub image: RgbImage,
    pub truth: BinaryMask,
    pub lesion: Ellipse,
}

fn skin_tone(level: f64) -> [f64; 3] {
    [level, level - 20.0, level - 35.0]
}

fn lesion_tone(level: f64) -> [f64; 3] {
    [level + 15.0, level, level - 10.0]
}

fn mix(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    std::array::from_fn(|c| a[c] * (1.0 - t) + b[c] * t)
}

/// Generates one case, consuming randomness from `rng`.
pub fn generate_case(rng: &mut ChaCha8Rng, opts: &SynthOptions) -> SyntheticCase {
    let (w, h) = (opts.width, opts.height);
    let side = w.min(h) as f64;

    let skin = skin_tone(rng.random_range(180.0..=220.0));
    let dark = lesion_tone(rng.random_range(40.0..=90.0));

    let a = rng.random_range(0.15..=0.28) * side;
    // Keep the narrowest curvature radius (b²/a) comfortably above the hair
    // top-hat radius so the lesion itself is never mistaken for hair.
    let b_min = (0.6 * a).max((24.0 * a).sqrt()).min(a);
    let b = rng.random_range(b_min..=a);
    let lesion = Ellipse {
        cx: w as f64 / 2.0 + rng.random_range(-0.08..=0.08) * side,
        cy: h as f64 / 2.0 + rng.random_range(-0.08..=0.08) * side,
        a,
        b,
        theta: rng.random_range(0.0..PI),
    };
    let truth = lesion.rasterize(w, h);

    let mut field: Vec<[f64; 3]> = (0..w * h)
        .map(|i| if truth.data()[i] { dark } else { skin })
        .collect();

    if opts.vignette {
        let radius = side / 2.0 * rng.random_range(0.92..=1.0);
        let level = rng.random_range(15.0..=35.0);
        let edge = [level; 3];
        let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
        for y in 0..h {
            for x in 0..w {
                let r = ((x as f64 + 0.5 - cx).powi(2) + (y as f64 + 0.5 - cy).powi(2)).sqrt();
                let t = ((r - radius) / 6.0).clamp(0.0, 1.0);
                if t > 0.0 {
                    let i = y * w + x;
                    field[i] = mix(field[i], edge, t);
                }
            }
        }
    }

    if opts.hair {
        for _ in 0..HAIR_STROKES {
            draw_hair(rng, &mut field, w, h);
        }
    }

    let noise = Normal::new(0.0, NOISE_SIGMA).expect("valid sigma");
    let mut data = Vec::with_capacity(3 * w * h);
    for px in &field {
        for &c in px {
            let v = c + noise.sample(rng);
            data.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    SyntheticCase {
        image: RgbImage::from_vec(w, h, data).expect("generated dimensions"),
        truth,
        lesion,
    }
}

/// A dark, gently bent quadratic Bézier stroke, 1–3 pixels wide.
fn draw_hair(rng: &mut ChaCha8Rng, field: &mut [[f64; 3]], w: usize, h: usize) {
    let (wf, hf) = (w as f64, h as f64);
    let side = wf.min(hf);
    let p0 = [rng.random_range(0.0..wf), rng.random_range(0.0..hf)];
    let heading: f64 = rng.random_range(0.0..2.0 * PI);
    let reach_len = rng.random_range(HAIR_LENGTH.0..=HAIR_LENGTH.1) * side;
    let p2 = [p0[0] + reach_len * heading.cos(), p0[1] + reach_len * heading.sin()];
    let bend = rng.random_range(-0.25..=0.25) * reach_len;
    let p1 = [
        (p0[0] + p2[0]) / 2.0 - bend * heading.sin(),
        (p0[1] + p2[1]) / 2.0 + bend * heading.cos(),
    ];
    let level = rng.random_range(20.0..=50.0);
    let half_width: f64 = rng.random_range(0.5..=1.5);
    let ink = [level; 3];
    let length = (p2[0] - p0[0]).hypot(p2[1] - p0[1]) + (p1[0] - p0[0]).hypot(p1[1] - p0[1]);
    let steps = (length * 2.0).ceil().max(1.0) as usize;
    let reach = half_width.ceil() as isize;
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let u = 1.0 - t;
        let x = u * u * p0[0] + 2.0 * u * t * p1[0] + t * t * p2[0];
        let y = u * u * p0[1] + 2.0 * u * t * p1[1] + t * t * p2[1];
        for dy in -reach..=reach {
            for dx in -reach..=reach {
                let (px, py) = (x.floor() as isize + dx, y.floor() as isize + dy);
                if px < 0 || py < 0 || px >= w as isize || py >= h as isize {
                    continue;
                }
                let d = (px as f64 + 0.5 - x).hypot(py as f64 + 0.5 - y);
                if d <= half_width {
                    field[py as usize * w + px as usize] = ink;
                }
            }
        }
    }
}

/// `count` cases drawn in sequence from one generator seeded with `seed`.
pub fn generate_suite(seed: u64, count: usize, opts: &SynthOptions) -> Vec<SyntheticCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| generate_case(&mut rng, opts)).collect()
}

/// File stem of the `index`-th generated case.
pub fn case_stem(index: usize) -> String {
    format!("synth_{index:03}")
}

/// Writes `<stem>.png` and `<stem><truth_suffix>.png` for every case; returns
/// the image paths.
pub fn write_suite(
    dir: impl AsRef<Path>,
    seed: u64,
    count: usize,
    opts: &SynthOptions,
    truth_suffix: &str,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::Unwritable {
        path: dir.to_owned(),
        reason: e.to_string(),
    })?;
    let mut paths = Vec::with_capacity(count);
    for (i, case) in generate_suite(seed, count, opts).iter().enumerate() {
        let stem = case_stem(i);
        let image_path = dir.join(format!("{stem}.png"));
        save_rgb(&case.image, &image_path)?;
        save_mask(&case.truth, dir.join(format!("{stem}{truth_suffix}.png")))?;
        paths.push(image_path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_cases() {
        let opts = SynthOptions {
            width: 64,
            height: 48,
            hair: true,
            vignette: true,
        };
        let a = generate_suite(3, 2, &opts);
        let b = generate_suite(3, 2, &opts);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.image, y.image);
            assert_eq!(x.truth, y.truth);
        }
        assert_ne!(a[0].image, a[1].image);
    }

    #[test]
    fn truth_is_the_rasterized_ellipse() {
        let opts = SynthOptions::default();
        for case in generate_suite(11, 3, &opts) {
            let analytic = BinaryMask::from_fn(opts.width, opts.height, |x, y| {
                case.lesion.contains(x, y)
            });
            assert_eq!(case.truth, analytic);
            assert!(case.truth.count() > 1000);
        }
    }

    #[test]
    fn lesion_is_darker_than_skin() {
        let case = &generate_suite(5, 1, &SynthOptions::default())[0];
        let mean = |want: bool| {
            let (sum, n) = case
                .image
                .pixels()
                .zip(case.truth.data())
                .filter(|(_, &t)| t == want)
                .fold((0u64, 0u64), |(s, n), (p, _)| (s + p[1] as u64, n + 1));
            sum as f64 / n as f64
        };
        assert!(mean(true) + 60.0 < mean(false));
    }
}

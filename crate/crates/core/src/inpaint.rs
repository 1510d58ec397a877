//! Inpainting of masked pixels from their surroundings.
//!
//! [`inpaint_telea`] marches a front inward from the mask boundary with the
//! fast marching method and fills each pixel, in arrival order, with a
//! weighted average of already-known pixels. [`inpaint_diffusion`] is a
//! harmonic (Laplace) fill relaxed with Jacobi sweeps; it is the PDE
//! alternative to the marching fill.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::raster::{merge_channels, split_channels, BinaryMask, GrayImage, RgbImage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InpaintMethod {
    Telea,
    Diffusion,
}

impl InpaintMethod {
    pub fn name(self) -> &'static str {
        match self {
            InpaintMethod::Telea => "telea",
            InpaintMethod::Diffusion => "diffusion",
        }
    }
}

impl std::str::FromStr for InpaintMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "telea" => Ok(InpaintMethod::Telea),
            "diffusion" | "ns" => Ok(InpaintMethod::Diffusion),
            other => Err(Error::InvalidParameter(format!(
                "unknown inpaint method {other:?} (expected telea or diffusion)"
            ))),
        }
    }
}

/// One pixel on the marching front. Ordered by arrival time, then position.
#[derive(Clone, Copy, Debug)]
pub struct NarrowBandEntry {
    pub arrival_time: f64,
    pub position: (usize, usize),
}

impl PartialEq for NarrowBandEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for NarrowBandEntry {}

impl PartialOrd for NarrowBandEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NarrowBandEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrival_time
            .total_cmp(&other.arrival_time)
            .then(self.position.cmp(&other.position))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Known,
    Band,
    Inside,
}

struct March<'a> {
    width: usize,
    height: usize,
    state: Vec<State>,
    time: Vec<f64>,
    planes: &'a mut [Vec<u8>],
}

impl March<'_> {
    fn known_time(&self, x: isize, y: isize) -> Option<f64> {
        if x < 0 || y < 0 || x >= self.width as isize || y >= self.height as isize {
            return None;
        }
        let i = y as usize * self.width + x as usize;
        (self.state[i] == State::Known).then_some(self.time[i])
    }

    /// Upwind solution of `|∇T| = 1` from known neighbors.
    fn solve(&self, x: usize, y: usize) -> f64 {
        let (x, y) = (x as isize, y as isize);
        let pick = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let h = pick(self.known_time(x - 1, y), self.known_time(x + 1, y));
        let v = pick(self.known_time(x, y - 1), self.known_time(x, y + 1));
        match (h, v) {
            (Some(a), Some(b)) if (a - b).abs() < 1.0 => {
                0.5 * (a + b + (2.0 - (a - b) * (a - b)).sqrt())
            }
            (Some(a), Some(b)) => 1.0 + a.min(b),
            (Some(a), None) | (None, Some(a)) => 1.0 + a,
            (None, None) => f64::INFINITY,
        }
    }

    /// Central (or one-sided) difference of arrival times over non-inside pixels.
    fn time_gradient(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        let t = self.time[i];
        let sample = |nx: isize, ny: isize| -> Option<f64> {
            if nx < 0 || ny < 0 || nx >= self.width as isize || ny >= self.height as isize {
                return None;
            }
            let j = ny as usize * self.width + nx as usize;
            (self.state[j] != State::Inside).then_some(self.time[j])
        };
        let diff = |lo: Option<f64>, hi: Option<f64>| match (lo, hi) {
            (Some(lo), Some(hi)) => 0.5 * (hi - lo),
            (None, Some(hi)) => hi - t,
            (Some(lo), None) => t - lo,
            (None, None) => 0.0,
        };
        let (xi, yi) = (x as isize, y as isize);
        (
            diff(sample(xi - 1, yi), sample(xi + 1, yi)),
            diff(sample(xi, yi - 1), sample(xi, yi + 1)),
        )
    }

    fn fill(&mut self, x: usize, y: usize, radius: usize) {
        let (gx, gy) = self.time_gradient(x, y);
        let t = self.time[y * self.width + x];
        let r = radius as isize;
        let r2 = (radius * radius) as isize;
        let mut sums = vec![0.0f64; self.planes.len()];
        let mut total = 0.0f64;
        for dy in -r..=r {
            let qy = y as isize + dy;
            if qy < 0 || qy >= self.height as isize {
                continue;
            }
            for dx in -r..=r {
                let qx = x as isize + dx;
                let d2 = dx * dx + dy * dy;
                if qx < 0 || qx >= self.width as isize || d2 > r2 || d2 == 0 {
                    continue;
                }
                let j = qy as usize * self.width + qx as usize;
                if self.state[j] != State::Known {
                    continue;
                }
                // Vector from the known sample towards the pixel being filled.
                let (rx, ry) = (-dx as f64, -dy as f64);
                let len2 = (dx * dx + dy * dy) as f64;
                let distance = 1.0 / (len2 * len2.sqrt());
                let level = 1.0 / (1.0 + (self.time[j] - t).abs());
                let mut direction = rx * gx + ry * gy;
                if direction.abs() <= 0.01 {
                    direction = 1e-6;
                }
                let w = (distance * level * direction).abs();
                total += w;
                for (s, plane) in sums.iter_mut().zip(self.planes.iter()) {
                    *s += w * plane[j] as f64;
                }
            }
        }
        if total > 0.0 {
            let i = y * self.width + x;
            for (s, plane) in sums.iter().zip(self.planes.iter_mut()) {
                plane[i] = (s / total).round().clamp(0.0, 255.0) as u8;
            }
        }
    }
}

/// Fast-marching fill over any number of planes sharing one mask. Returns the
/// fill order.
fn telea_planes(
    planes: &mut [Vec<u8>],
    width: usize,
    height: usize,
    mask: &BinaryMask,
    radius: usize,
) -> Vec<(usize, usize)> {
    let state: Vec<State> = mask
        .data()
        .iter()
        .map(|&m| if m { State::Inside } else { State::Known })
        .collect();
    let time = state
        .iter()
        .map(|s| if *s == State::Known { 0.0 } else { f64::INFINITY })
        .collect();
    let mut march = March {
        width,
        height,
        state,
        time,
        planes,
    };

    let mut heap = BinaryHeap::new();
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            if march.state[i] != State::Inside {
                continue;
            }
            let t = march.solve(x, y);
            if t.is_finite() {
                march.time[i] = t;
                march.state[i] = State::Band;
                heap.push(Reverse(NarrowBandEntry {
                    arrival_time: t,
                    position: (x, y),
                }));
            }
        }
    }

    let mut order = Vec::new();
    while let Some(Reverse(entry)) = heap.pop() {
        let (x, y) = entry.position;
        let i = y * width + x;
        if march.state[i] == State::Known || entry.arrival_time > march.time[i] {
            continue;
        }
        march.fill(x, y, radius);
        march.state[i] = State::Known;
        order.push((x, y));
        let neighbors = [
            (x.wrapping_sub(1), y),
            (x + 1, y),
            (x, y.wrapping_sub(1)),
            (x, y + 1),
        ];
        for (nx, ny) in neighbors {
            if nx >= width || ny >= height {
                continue;
            }
            let j = ny * width + nx;
            if march.state[j] == State::Known {
                continue;
            }
            let t = march.solve(nx, ny);
            if t < march.time[j] {
                march.time[j] = t;
                march.state[j] = State::Band;
                heap.push(Reverse(NarrowBandEntry {
                    arrival_time: t,
                    position: (nx, ny),
                }));
            }
        }
    }
    order
}

fn check_inputs(dims: (usize, usize), mask: &BinaryMask, radius: usize) -> Result<()> {
    Error::check_dims(dims, mask.dims())?;
    if radius < 1 {
        return Err(Error::InvalidParameter("inpaint radius must be at least 1".into()));
    }
    Ok(())
}

/// Fills masked pixels by fast marching; unmasked pixels are returned untouched.
///
/// Masked regions with no known pixel anywhere in the image are left as is.
pub fn inpaint_telea(img: &GrayImage, mask: &BinaryMask, radius: usize) -> Result<GrayImage> {
    inpaint_telea_traced(img, mask, radius).map(|(out, _)| out)
}

pub(crate) fn inpaint_telea_traced(
    img: &GrayImage,
    mask: &BinaryMask,
    radius: usize,
) -> Result<(GrayImage, Vec<(usize, usize)>)> {
    check_inputs(img.dims(), mask, radius)?;
    let (w, h) = img.dims();
    let mut planes = [img.data().to_vec()];
    let order = telea_planes(&mut planes, w, h, mask, radius);
    let [plane] = planes;
    Ok((GrayImage::from_vec(w, h, plane)?, order))
}

/// Harmonic fill: masked pixels start at the mean of their unmasked
/// 8-neighbors (or the global unmasked mean) and are then relaxed towards the
/// mean of their 4-neighbors for `iterations` Jacobi sweeps.
pub fn inpaint_diffusion(img: &GrayImage, mask: &BinaryMask, iterations: usize) -> Result<GrayImage> {
    diffusion_traced(img, mask, iterations, |_| {})
}

/// As [`inpaint_diffusion`], reporting the largest per-pixel change of every sweep.
pub(crate) fn diffusion_traced(
    img: &GrayImage,
    mask: &BinaryMask,
    iterations: usize,
    mut on_sweep: impl FnMut(f64),
) -> Result<GrayImage> {
    Error::check_dims(img.dims(), mask.dims())?;
    if iterations < 1 {
        return Err(Error::InvalidParameter(
            "diffusion needs at least one iteration".into(),
        ));
    }
    let (w, h) = img.dims();
    let known: Vec<f64> = img
        .data()
        .iter()
        .zip(mask.data())
        .filter(|(_, &m)| !m)
        .map(|(&v, _)| v as f64)
        .collect();
    if known.is_empty() || known.len() == img.len() {
        return Ok(img.clone());
    }
    let global_mean = known.iter().sum::<f64>() / known.len() as f64;

    let masked: Vec<(usize, usize)> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .filter(|&(x, y)| mask.get(x, y))
        .collect();
    let mut current: Vec<f64> = img.data().iter().map(|&v| v as f64).collect();
    for &(x, y) in &masked {
        let (sum, n) = img
            .neighbors8(x, y)
            .filter(|&(nx, ny)| !mask.get(nx, ny))
            .fold((0.0, 0usize), |(s, n), (nx, ny)| {
                (s + img.get(nx, ny) as f64, n + 1)
            });
        current[y * w + x] = if n > 0 { sum / n as f64 } else { global_mean };
    }

    let mut next = current.clone();
    for _ in 0..iterations {
        let mut change = 0.0f64;
        for &(x, y) in &masked {
            let (sum, n) = img
                .neighbors4(x, y)
                .fold((0.0, 0usize), |(s, n), (nx, ny)| (s + current[ny * w + nx], n + 1));
            let i = y * w + x;
            next[i] = sum / n as f64;
            change = change.max((next[i] - current[i]).abs());
        }
        std::mem::swap(&mut current, &mut next);
        on_sweep(change);
    }

    let mut out = img.clone();
    for &(x, y) in &masked {
        out.set(x, y, current[y * w + x].round().clamp(0.0, 255.0) as u8);
    }
    Ok(out)
}

/// Per-channel inpainting of a color image. `radius` drives the marching fill,
/// `iterations` the diffusion fill.
pub fn inpaint_rgb(
    img: &RgbImage,
    mask: &BinaryMask,
    method: InpaintMethod,
    radius: usize,
    iterations: usize,
) -> Result<RgbImage> {
    match method {
        InpaintMethod::Telea => {
            check_inputs(img.dims(), mask, radius)?;
            let (w, h) = img.dims();
            let mut planes = split_channels(img).map(|p| p.into_vec());
            telea_planes(&mut planes, w, h, mask, radius);
            let [r, g, b] = planes.map(|p| GrayImage::from_vec(w, h, p).expect("plane size"));
            merge_channels(&r, &g, &b)
        }
        InpaintMethod::Diffusion => {
            let [r, g, b] = split_channels(img);
            merge_channels(
                &inpaint_diffusion(&r, mask, iterations)?,
                &inpaint_diffusion(&g, mask, iterations)?,
                &inpaint_diffusion(&b, mask, iterations)?,
            )
        }
    }
}

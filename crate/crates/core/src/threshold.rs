//! Global histogram thresholding (Otsu).

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram256 {
    counts: [u64; 256],
}

impl Histogram256 {
    pub fn from_counts(counts: [u64; 256]) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl Default for Histogram256 {
    fn default() -> Self {
        Self { counts: [0; 256] }
    }
}

pub fn histogram(img: &GrayImage) -> Histogram256 {
    let mut counts = [0u64; 256];
    for &v in img.data() {
        counts[v as usize] += 1;
    }
    Histogram256 { counts }
}

/// Between-class variance at one split, kept as the exact fraction
/// `numer / denom` scaled by `N²`.
#[derive(Clone, Copy)]
struct Score {
    numer: u128,
    denom: u128,
}

impl Score {
    /// `self > other`, exactly when the cross products fit in 128 bits.
    fn beats(&self, other: &Score) -> bool {
        match (
            self.numer.checked_mul(other.denom),
            other.numer.checked_mul(self.denom),
        ) {
            (Some(a), Some(b)) => a > b,
            _ => {
                self.numer as f64 / self.denom as f64 > other.numer as f64 / other.denom as f64
            }
        }
    }
}

/// Threshold `t` maximizing `ω₀ω₁(μ₀ − μ₁)²` with class 0 = values `≤ t`.
///
/// Ties go to the smallest `t`; a histogram with a single occupied bin
/// returns that bin.
pub fn otsu_threshold(hist: &Histogram256) -> Result<u8> {
    let counts = hist.counts();
    let n: u128 = counts.iter().map(|&c| c as u128).sum();
    if n == 0 {
        return Err(Error::EmptyHistogram);
    }
    let mut occupied = counts.iter().enumerate().filter(|(_, &c)| c > 0);
    let first = occupied.next().map(|(v, _)| v).unwrap();
    if occupied.next().is_none() {
        return Ok(first as u8);
    }

    let s: u128 = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| v as u128 * c as u128)
        .sum();
    let mut n0 = 0u128;
    let mut s0 = 0u128;
    let mut best: Option<(u8, Score)> = None;
    for (t, &c) in counts.iter().enumerate() {
        n0 += c as u128;
        s0 += t as u128 * c as u128;
        let n1 = n - n0;
        // N²·ω₀ω₁(μ₀−μ₁)² = (N·S₀ − n₀·S)² / (n₀·n₁); empty classes score zero.
        let score = if n0 == 0 || n1 == 0 {
            Score { numer: 0, denom: 1 }
        } else {
            let diff = (n * s0).abs_diff(n0 * s);
            Score {
                numer: diff.saturating_mul(diff),
                denom: n0 * n1,
            }
        };
        match &best {
            Some((_, b)) if !score.beats(b) => {}
            _ => best = Some((t as u8, score)),
        }
    }
    Ok(best.map(|(t, _)| t).unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    /// `pixel > t` is foreground.
    ForegroundAbove,
    /// `pixel ≤ t` is foreground.
    ForegroundBelow,
}

pub fn apply_threshold(img: &GrayImage, t: u8, polarity: Polarity) -> BinaryMask {
    match polarity {
        Polarity::ForegroundAbove => img.map(|v| v > t),
        Polarity::ForegroundBelow => img.map(|v| v <= t),
    }
}

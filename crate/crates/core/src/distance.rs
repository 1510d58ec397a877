//! Exact Euclidean distance transform.
//!
//! A per-row scan gives the horizontal distance to the nearest background
//! pixel; a per-column lower envelope of parabolas then combines rows. All
//! arithmetic is in squared integer distances until the final square root.

use crate::raster::{BinaryMask, FloatImage, Raster};

/// Squared distance to the nearest background pixel, or `None` when the mask
/// has no background at all.
pub fn edt_squared(mask: &BinaryMask) -> Option<Raster<u64>> {
    let (width, height) = mask.dims();
    if !mask.data().iter().any(|&v| !v) {
        return None;
    }

    // Horizontal pass: distance to nearest background in the same row.
    let mut horiz: Vec<Option<u64>> = vec![None; width * height];
    for y in 0..height {
        let row = mask.row(y);
        let out = &mut horiz[y * width..(y + 1) * width];
        let mut last: Option<usize> = None;
        for x in 0..width {
            if !row[x] {
                last = Some(x);
            }
            out[x] = last.map(|l| (x - l) as u64);
        }
        last = None;
        for x in (0..width).rev() {
            if !row[x] {
                last = Some(x);
            }
            if let Some(l) = last {
                let d = (l - x) as u64;
                out[x] = Some(out[x].map_or(d, |o| o.min(d)));
            }
        }
    }

    let mut result = Raster::new(width, height, 0u64);
    let mut column: Vec<Option<u64>> = vec![None; height];
    let mut envelope = Vec::with_capacity(height);
    for x in 0..width {
        for y in 0..height {
            column[y] = horiz[y * width + x].map(|d| d * d);
        }
        lower_envelope(&column, &mut envelope);
        for (y, &d) in envelope.iter().enumerate() {
            result.set(x, y, d);
        }
    }
    Some(result)
}

/// Minimum over `q` of `f(q) + (p − q)²` for every `p`, skipping infinite `f`.
fn lower_envelope(f: &[Option<u64>], out: &mut Vec<u64>) {
    let n = f.len();
    out.clear();
    // Parabola apexes in the envelope and the left boundaries of their spans.
    let mut apex: Vec<i64> = Vec::with_capacity(n);
    // `None` stands for minus infinity.
    let mut bound: Vec<Option<(i64, i64)>> = Vec::with_capacity(n);
    let value = |q: i64| f[q as usize].unwrap() as i64;
    // Intersection abscissa of parabolas at q and p (q < p) as a fraction.
    let cross = |q: i64, p: i64| -> (i64, i64) {
        ((value(p) + p * p) - (value(q) + q * q), 2 * (p - q))
    };
    // a/b ≤ c/d with positive denominators.
    let le = |(a, b): (i64, i64), (c, d): (i64, i64)| a * d <= c * b;

    for p in 0..n as i64 {
        if f[p as usize].is_none() {
            continue;
        }
        loop {
            match apex.last() {
                None => {
                    apex.push(p);
                    bound.push(None);
                    break;
                }
                Some(&q) => {
                    let s = cross(q, p);
                    if bound.last().unwrap().is_some_and(|b| le(s, b)) {
                        apex.pop();
                        bound.pop();
                    } else {
                        apex.push(p);
                        bound.push(Some(s));
                        break;
                    }
                }
            }
        }
    }

    let mut k = 0;
    for p in 0..n as i64 {
        // Advance while the next span starts at or before p.
        while k + 1 < apex.len() && bound[k + 1].is_some_and(|b| le(b, (p, 1))) {
            k += 1;
        }
        let q = apex[k];
        out.push((value(q) + (p - q) * (p - q)) as u64);
    }
}

/// Euclidean distance of every pixel to the nearest background pixel.
///
/// Background maps to 0. A mask without background maps every pixel to the
/// finite sentinel `width + height`, larger than any reachable distance.
pub fn edt(mask: &BinaryMask) -> FloatImage {
    match edt_squared(mask) {
        Some(sq) => sq.map(|d| (d as f64).sqrt()),
        None => FloatImage::new(
            mask.width(),
            mask.height(),
            (mask.width() + mask.height()) as f64,
        ),
    }
}

//! Method 2: border filling, hair removal, pyramid mean shift and Otsu.

use std::collections::VecDeque;

use crate::config::{ColorMode, PipelineConfig};
use crate::error::{Error, Result};
use crate::inpaint::{inpaint_rgb, inpaint_telea, InpaintMethod};
use crate::labels::largest_component;
use crate::meanshift::mean_shift_filter;
use crate::morphology::{close_b, dilate, open, open_b, StructuringElement};
use crate::pipeline_watershed::{hair_mask_from_response, hair_response};
use crate::raster::{gray_to_rgb, rgb_to_gray, BinaryMask, GrayImage, RgbImage};
use crate::threshold::{apply_threshold, histogram, otsu_threshold, Polarity};

/// 4-connected flood from `seeds` over pixels strictly darker than
/// `max_intensity`. Seeds that are not dark enough contribute nothing.
pub fn region_grow(img: &GrayImage, seeds: &[(usize, usize)], max_intensity: u8) -> Result<BinaryMask> {
    let (w, h) = img.dims();
    if let Some(&(x, y)) = seeds.iter().find(|&&(x, y)| x >= w || y >= h) {
        return Err(Error::SeedOutOfBounds { x, y });
    }
    let mut grown = BinaryMask::new(w, h, false);
    let mut queue = VecDeque::new();
    for &(x, y) in seeds {
        if img.get(x, y) < max_intensity && !grown.get(x, y) {
            grown.set(x, y, true);
            queue.push_back((x, y));
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        for (nx, ny) in img.neighbors4(x, y) {
            if !grown.get(nx, ny) && img.get(nx, ny) < max_intensity {
                grown.set(nx, ny, true);
                queue.push_back((nx, ny));
            }
        }
    }
    Ok(grown)
}

/// The dark region connected to the four image corners, found on a dilated
/// then opened copy of `gray`.
pub fn border_mask(gray: &GrayImage, cfg: &PipelineConfig) -> BinaryMask {
    let work = open(
        &dilate(gray, &StructuringElement::disk(cfg.border_dilate_radius)),
        &StructuringElement::disk(cfg.border_open_radius),
    );
    let (w, h) = gray.dims();
    let corners = [(0, 0), (w - 1, 0), (0, h - 1), (w - 1, h - 1)];
    region_grow(&work, &corners, cfg.border_threshold).expect("corners are in bounds")
}

/// Replaces the dark corner-connected border with `border_fill_value`.
pub fn fill_borders(gray: &GrayImage, cfg: &PipelineConfig) -> GrayImage {
    let mask = border_mask(gray, cfg);
    gray.zip_map(&mask, |v, m| if m { cfg.border_fill_value } else { v })
        .expect("same dimensions")
}

fn remove_hair_gray(gray: &GrayImage, cfg: &PipelineConfig) -> Result<(GrayImage, BinaryMask)> {
    let hair = hair_mask_from_response(&hair_response(gray, cfg), cfg);
    if hair.is_blank() {
        return Ok((gray.clone(), hair));
    }
    Ok((inpaint_telea(gray, &hair, cfg.inpaint_radius)?, hair))
}

/// Method 2 end to end; returns the lesion mask.
///
/// In [`ColorMode::Gray`] the border-filled, hair-free gray image is
/// replicated to three channels before mean shift. In [`ColorMode::Color`]
/// the border fill and hair mask are computed on gray but applied to the
/// color image, which is then mean-shifted directly.
pub fn segment_method2(img: &RgbImage, cfg: &PipelineConfig) -> Result<BinaryMask> {
    cfg.validate()?;
    let gray = rgb_to_gray(img);
    let border = border_mask(&gray, cfg);
    let filled = gray
        .zip_map(&border, |v, m| if m { cfg.border_fill_value } else { v })
        .expect("same dimensions");

    let shifted = match cfg.color_mode {
        ColorMode::Gray => {
            let (hairless, _) = remove_hair_gray(&filled, cfg)?;
            mean_shift_filter(&gray_to_rgb(&hairless), &cfg.mean_shift())
        }
        ColorMode::Color => {
            let fill = [cfg.border_fill_value; 3];
            let mut color = img.clone();
            for y in 0..img.height() {
                for x in 0..img.width() {
                    if border.get(x, y) {
                        color.set(x, y, fill);
                    }
                }
            }
            let hair = hair_mask_from_response(&hair_response(&filled, cfg), cfg);
            if !hair.is_blank() {
                color = inpaint_rgb(
                    &color,
                    &hair,
                    InpaintMethod::Telea,
                    cfg.inpaint_radius,
                    cfg.diffusion_iterations,
                )?;
            }
            mean_shift_filter(&color, &cfg.mean_shift())
        }
    };

    let smooth = rgb_to_gray(&shifted);
    let t = otsu_threshold(&histogram(&smooth))?;
    let binary = apply_threshold(&smooth, t, Polarity::ForegroundBelow);
    if binary.count() == binary.len() {
        return Err(Error::NoLesionCandidate);
    }
    let se = StructuringElement::disk(cfg.post_morph_radius);
    let lesion = largest_component(&open_b(&close_b(&binary, &se), &se));
    if lesion.is_blank() {
        return Err(Error::NoLesionCandidate);
    }
    Ok(lesion)
}

//! Raster file I/O: PNG and binary PGM/PPM (JPEG is decoded when present).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageError, ImageFormat};

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage, RgbImage};

fn decode(path: &Path) -> Result<DynamicImage> {
    let bytes = std::fs::read(path).map_err(|source| Error::Unreadable {
        path: path.to_owned(),
        source,
    })?;
    let format = image::guess_format(&bytes).map_err(|_| {
        Error::UnsupportedFormat(format!("{} (unrecognized signature)", path.display()))
    })?;
    image::load_from_memory_with_format(&bytes, format).map_err(|e| match e {
        ImageError::Unsupported(u) => Error::UnsupportedFormat(format!("{}: {u}", path.display())),
        other => Error::Corrupt {
            path: path.to_owned(),
            reason: other.to_string(),
        },
    })
}

/// Loads any supported raster as 8-bit RGB. Gray sources are replicated to
/// three channels, 16-bit sources are scaled down.
pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let rgb = decode(path)?.to_rgb8();
    let (w, h) = rgb.dimensions();
    RgbImage::from_vec(w as usize, h as usize, rgb.into_raw()).map_err(|_| Error::Corrupt {
        path: path.to_owned(),
        reason: "image has zero width or height".into(),
    })
}

/// Loads a ground-truth style mask: foreground is any pixel with luma ≥ 128.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let path = path.as_ref();
    let luma = decode(path)?.to_luma8();
    let (w, h) = luma.dimensions();
    let data = luma.into_raw().into_iter().map(|v| v >= 128).collect();
    BinaryMask::from_vec(w as usize, h as usize, data).map_err(|_| Error::Corrupt {
        path: path.to_owned(),
        reason: "mask has zero width or height".into(),
    })
}

fn output_format(path: &Path) -> ImageFormat {
    match ImageFormat::from_path(path) {
        Ok(f @ (ImageFormat::Png | ImageFormat::Pnm)) => f,
        _ => ImageFormat::Png,
    }
}

fn write(path: &Path, bytes: &[u8], w: usize, h: usize, color: ExtendedColorType) -> Result<()> {
    let unwritable = |reason: String| Error::Unwritable {
        path: path.to_owned(),
        reason,
    };
    match output_format(path) {
        // The encoder's automatic header may pick P7; binary P5/P6 is what
        // other tools expect from .pgm/.ppm.
        ImageFormat::Pnm => {
            let subtype = match color {
                ExtendedColorType::L8 => PnmSubtype::Graymap(SampleEncoding::Binary),
                _ => PnmSubtype::Pixmap(SampleEncoding::Binary),
            };
            let file = File::create(path).map_err(|e| unwritable(e.to_string()))?;
            let mut out = BufWriter::new(file);
            PnmEncoder::new(&mut out)
                .with_subtype(subtype)
                .write_image(bytes, w as u32, h as u32, color)
                .map_err(|e| unwritable(e.to_string()))?;
            out.flush().map_err(|e| unwritable(e.to_string()))
        }
        format => image::save_buffer_with_format(path, bytes, w as u32, h as u32, color, format)
            .map_err(|e| unwritable(e.to_string())),
    }
}

/// Writes a single-channel 8-bit mask, foreground 255 and background 0.
pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    save_gray(&mask.to_gray(), path)
}

pub fn save_gray(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    write(
        path.as_ref(),
        img.data(),
        img.width(),
        img.height(),
        ExtendedColorType::L8,
    )
}

pub fn save_rgb(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    write(
        path.as_ref(),
        img.data(),
        img.width(),
        img.height(),
        ExtendedColorType::Rgb8,
    )
}

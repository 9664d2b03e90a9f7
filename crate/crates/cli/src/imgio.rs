//! File loading/saving for the CLI. Binary pixmaps are the native format;
//! PNG is a convenience layer that converts to and from the same in-memory
//! types.

use std::path::Path;

use descratch::raster::{self, quantize, Image, Mask};

use crate::CliError;

fn is_png(path: &Path) -> bool {
    path.extension()
        .map(|e| e.eq_ignore_ascii_case("png"))
        .unwrap_or(false)
}

pub fn load_image_any(path: &Path) -> Result<Image, CliError> {
    if !is_png(path) {
        return raster::load_image(path).map_err(CliError::from);
    }
    let dynamic = image::open(path)
        .map_err(|e| CliError::Io(format!("failed to read {}: {e}", path.display())))?;
    let img = match dynamic {
        image::DynamicImage::ImageLuma8(gray) => Image::new(
            gray.width() as usize,
            gray.height() as usize,
            1,
            gray.as_raw().iter().map(|&v| v as f64).collect(),
        ),
        other => {
            let rgb = other.to_rgb8();
            Image::new(
                rgb.width() as usize,
                rgb.height() as usize,
                3,
                rgb.as_raw().iter().map(|&v| v as f64).collect(),
            )
        }
    };
    img.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn save_image_any(img: &Image, path: &Path) -> Result<(), CliError> {
    if !is_png(path) {
        return raster::save_image(img, path).map_err(CliError::from);
    }
    let bytes: Vec<u8> = img.samples().iter().map(|&v| quantize(v)).collect();
    let (w, h) = (img.width() as u32, img.height() as u32);
    let result = if img.channels() == 1 {
        image::GrayImage::from_raw(w, h, bytes)
            .expect("buffer length checked by Image invariants")
            .save(path)
    } else {
        image::RgbImage::from_raw(w, h, bytes)
            .expect("buffer length checked by Image invariants")
            .save(path)
    };
    result.map_err(|e| CliError::Io(format!("failed to write {}: {e}", path.display())))
}

pub fn load_mask_any(path: &Path) -> Result<Mask, CliError> {
    if !is_png(path) {
        return raster::load_mask(path).map_err(CliError::from);
    }
    let gray = image::open(path)
        .map_err(|e| CliError::Io(format!("failed to read {}: {e}", path.display())))?
        .to_luma8();
    Mask::new(
        gray.width() as usize,
        gray.height() as usize,
        gray.as_raw().iter().map(|&v| v >= 128).collect(),
    )
    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn save_mask_any(mask: &Mask, path: &Path) -> Result<(), CliError> {
    if !is_png(path) {
        return raster::save_mask(mask, path).map_err(CliError::from);
    }
    let bytes: Vec<u8> = mask
        .bits()
        .iter()
        .map(|&b| if b { 255 } else { 0 })
        .collect();
    image::GrayImage::from_raw(mask.width() as u32, mask.height() as u32, bytes)
        .expect("buffer length checked by Mask invariants")
        .save(path)
        .map_err(|e| CliError::Io(format!("failed to write {}: {e}", path.display())))
}

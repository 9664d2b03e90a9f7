//! Image-quality metrics: MSE, PSNR (peak 255), and single-scale SSIM.
//!
//! PSNR for color images is computed over all channels jointly (one MSE
//! across R, G, B); SSIM is computed on luma. Identical inputs report PSNR
//! as positive infinity, serialized as "inf" by the CLI.

use crate::error::{Error, Result};
use crate::raster::{Image, Mask};

/// SSIM window size (fixed).
pub const SSIM_WINDOW: usize = 11;
/// SSIM Gaussian sigma (fixed).
pub const SSIM_SIGMA: f64 = 1.5;

fn check_shapes(a: &Image, b: &Image) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch(
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels(),
        ));
    }
    Ok(())
}

/// Mean squared error over all samples.
pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    check_shapes(a, b)?;
    let sum: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.samples().len() as f64)
}

/// Peak signal-to-noise ratio in dB with peak 255. Identical images give
/// positive infinity.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / m).log10())
}

/// Mean squared error over the masked (missing) samples only. Diagnostic
/// companion to `mse`; reported metrics use the full frame.
pub fn mse_masked(a: &Image, b: &Image, mask: &Mask) -> Result<f64> {
    check_shapes(a, b)?;
    if a.width() != mask.width() || a.height() != mask.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            mask.width(),
            mask.height(),
        ));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for y in 0..a.height() {
        for x in 0..a.width() {
            if !mask.missing(x, y) {
                continue;
            }
            for c in 0..a.channels() {
                let d = a.get(x, y, c) - b.get(x, y, c);
                sum += d * d;
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::NoMissingPixels);
    }
    Ok(sum / count as f64)
}

/// PSNR over the masked samples only.
pub fn psnr_masked(a: &Image, b: &Image, mask: &Mask) -> Result<f64> {
    let m = mse_masked(a, b, mask)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / m).log10())
}

/// SSIM averaged over window positions whose center pixel is masked.
pub fn ssim_masked(a: &Image, b: &Image, mask: &Mask) -> Result<f64> {
    if a.width() != mask.width() || a.height() != mask.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            mask.width(),
            mask.height(),
        ));
    }
    let half = SSIM_WINDOW / 2;
    ssim_filtered(a, b, |x0, y0| mask.missing(x0 + half, y0 + half))
}

fn luma_plane(img: &Image) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            out.push(img.luma_at(x, y));
        }
    }
    out
}

fn gaussian_window() -> [f64; SSIM_WINDOW * SSIM_WINDOW] {
    let mut win = [0.0; SSIM_WINDOW * SSIM_WINDOW];
    let c = (SSIM_WINDOW / 2) as f64;
    let mut sum = 0.0;
    for (i, w) in win.iter_mut().enumerate() {
        let dx = (i % SSIM_WINDOW) as f64 - c;
        let dy = (i / SSIM_WINDOW) as f64 - c;
        *w = (-(dx * dx + dy * dy) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
        sum += *w;
    }
    for w in win.iter_mut() {
        *w /= sum;
    }
    win
}

/// Single-scale SSIM: 11x11 Gaussian window with sigma 1.5,
/// C1 = (0.01*255)^2, C2 = (0.03*255)^2, luma for color images, mean over
/// all fully-interior window positions (valid-region convolution).
pub fn ssim(a: &Image, b: &Image) -> Result<f64> {
    ssim_filtered(a, b, |_, _| true)
}

/// SSIM mean over the window positions (identified by their top-left
/// corner) selected by `keep`.
fn ssim_filtered(a: &Image, b: &Image, keep: impl Fn(usize, usize) -> bool) -> Result<f64> {
    check_shapes(a, b)?;
    let (w, h) = (a.width(), a.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::TooSmallForSsim(w, h, SSIM_WINDOW));
    }
    let c1 = (0.01f64 * 255.0) * (0.01 * 255.0);
    let c2 = (0.03f64 * 255.0) * (0.03 * 255.0);
    let win = gaussian_window();
    let pa = luma_plane(a);
    let pb = luma_plane(b);

    let mut total = 0.0;
    let mut positions = 0u64;
    for y0 in 0..=h - SSIM_WINDOW {
        for x0 in 0..=w - SSIM_WINDOW {
            if !keep(x0, y0) {
                continue;
            }
            let mut mu_a = 0.0;
            let mut mu_b = 0.0;
            let mut aa = 0.0;
            let mut bb = 0.0;
            let mut ab = 0.0;
            for wy in 0..SSIM_WINDOW {
                let row = (y0 + wy) * w + x0;
                let wrow = wy * SSIM_WINDOW;
                for wx in 0..SSIM_WINDOW {
                    let weight = win[wrow + wx];
                    let va = pa[row + wx];
                    let vb = pb[row + wx];
                    mu_a += weight * va;
                    mu_b += weight * vb;
                    aa += weight * va * va;
                    bb += weight * vb * vb;
                    ab += weight * va * vb;
                }
            }
            let var_a = aa - mu_a * mu_a;
            let var_b = bb - mu_b * mu_b;
            let cov = ab - mu_a * mu_b;
            let num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
            let den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += num / den;
            positions += 1;
        }
    }
    if positions == 0 {
        return Err(Error::NoMissingPixels);
    }
    Ok(total / positions as f64)
}

//! Nearest-neighbor downsampling for multi-scale formation, and bicubic
//! (Catmull-Rom) upsampling of per-scale results back to the original size.
//!
//! Downsampling copies source values verbatim: output pixel (x, y) takes
//! input pixel (min(x*f, W-1), min(y*f, H-1)), with ceiling-division output
//! sizes so no factor produces a zero dimension. Upsampling is a separable
//! cubic convolution with the Catmull-Rom kernel (a = -0.5), border samples
//! replicated, and the coordinate mapping src = dst * (src_size/dst_size) —
//! the inverse of the downsample grid.

use crate::error::{Error, Result};
use crate::raster::{Image, Mask};

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn sampled_index(out: usize, factor: usize, size: usize) -> usize {
    (out * factor).min(size - 1)
}

/// Downsamples by an integer factor using nearest-neighbor selection;
/// never interpolates.
pub fn downsample_nearest(img: &Image, factor: usize) -> Result<Image> {
    if factor < 1 {
        return Err(Error::BadFactor);
    }
    let (w, h, c) = (img.width(), img.height(), img.channels());
    let (ow, oh) = (ceil_div(w, factor), ceil_div(h, factor));
    let mut samples = Vec::with_capacity(ow * oh * c);
    for y in 0..oh {
        let sy = sampled_index(y, factor, h);
        for x in 0..ow {
            let sx = sampled_index(x, factor, w);
            for ch in 0..c {
                samples.push(img.get(sx, sy, ch));
            }
        }
    }
    Image::new(ow, oh, c, samples)
}

/// Downsamples a mask with the same index mapping as `downsample_nearest`.
pub fn downsample_mask(mask: &Mask, factor: usize) -> Result<Mask> {
    if factor < 1 {
        return Err(Error::BadFactor);
    }
    let (w, h) = (mask.width(), mask.height());
    let (ow, oh) = (ceil_div(w, factor), ceil_div(h, factor));
    let mut bits = Vec::with_capacity(ow * oh);
    for y in 0..oh {
        let sy = sampled_index(y, factor, h);
        for x in 0..ow {
            bits.push(mask.missing(sampled_index(x, factor, w), sy));
        }
    }
    Mask::new(ow, oh, bits)
}

/// Catmull-Rom cubic convolution kernel, a = -0.5.
#[inline]
pub fn catmull_rom(t: f64) -> f64 {
    let t = t.abs();
    if t < 1.0 {
        ((1.5 * t - 2.5) * t) * t + 1.0
    } else if t < 2.0 {
        ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0
    } else {
        0.0
    }
}

/// Tap positions (clamped to the axis) and kernel weights for one output
/// coordinate along an axis of `src_len` samples mapped to `dst_len`.
fn taps(dst: usize, src_len: usize, dst_len: usize) -> ([usize; 4], [f64; 4]) {
    let s = dst as f64 * (src_len as f64 / dst_len as f64);
    let base = s.floor();
    let t = s - base;
    let base = base as i64;
    let mut idx = [0usize; 4];
    let mut wgt = [0.0f64; 4];
    for k in 0..4 {
        let off = k as i64 - 1;
        idx[k] = (base + off).clamp(0, src_len as i64 - 1) as usize;
        wgt[k] = catmull_rom(t - off as f64);
    }
    (idx, wgt)
}

/// Upsamples to `target_w` x `target_h` (each at least the source size)
/// with separable Catmull-Rom convolution. Only the final output is clamped
/// to `[0, 255]`; the intermediate pass keeps unclipped values so the result
/// matches a direct 2-D kernel sum.
pub fn upsample_bicubic(img: &Image, target_w: usize, target_h: usize) -> Result<Image> {
    let (w, h, c) = (img.width(), img.height(), img.channels());
    if target_w < w || target_h < h {
        return Err(Error::UpsampleTargetTooSmall(target_w, target_h, w, h));
    }

    // Horizontal pass: w x h -> target_w x h, unclamped.
    let mut mid = vec![0.0f64; target_w * h * c];
    for x in 0..target_w {
        let (idx, wgt) = taps(x, w, target_w);
        for y in 0..h {
            for ch in 0..c {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += img.get(idx[k], y, ch) * wgt[k];
                }
                mid[(y * target_w + x) * c + ch] = acc;
            }
        }
    }

    // Vertical pass: target_w x h -> target_w x target_h, clamped.
    let mut samples = vec![0.0f64; target_w * target_h * c];
    for y in 0..target_h {
        let (idx, wgt) = taps(y, h, target_h);
        for x in 0..target_w {
            for ch in 0..c {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += mid[(idx[k] * target_w + x) * c + ch] * wgt[k];
                }
                samples[(y * target_w + x) * c + ch] = acc.clamp(0.0, 255.0);
            }
        }
    }
    Image::new(target_w, target_h, c, samples)
}

//! Shared test support: a deterministic synthetic "natural image"
//! generator plus helpers used by the acceptance suite.
//!
//! The generator layers band-limited noise octaves (approximating the 1/f
//! power spectrum of photographs) under smooth large-scale structure: soft
//! blobs, one gentle oriented edge, and a broad illumination gradient.
//! Fine texture is stochastic, not sinusoidal, so it is as unpredictable
//! for a local interpolator as real film grain or foliage.

use descratch::maskgen::SplitMix64;
use descratch::raster::Image;

/// One noise octave: per-pixel uniform noise box-blurred `passes` times,
/// rescaled to unit standard deviation.
fn noise_octave(width: usize, height: usize, passes: usize, rng: &mut SplitMix64) -> Vec<f64> {
    let mut field: Vec<f64> = (0..width * height)
        .map(|_| rng.next_f64() * 2.0 - 1.0)
        .collect();
    let mut scratch = vec![0.0; width * height];
    for _ in 0..passes {
        // 3x3 box blur with clamped borders, separable.
        for y in 0..height {
            for x in 0..width {
                let x0 = x.saturating_sub(1);
                let x1 = (x + 1).min(width - 1);
                scratch[y * width + x] =
                    (field[y * width + x0] + field[y * width + x] + field[y * width + x1]) / 3.0;
            }
        }
        for x in 0..width {
            for y in 0..height {
                let y0 = y.saturating_sub(1);
                let y1 = (y + 1).min(height - 1);
                field[y * width + x] =
                    (scratch[y0 * width + x] + scratch[y * width + x] + scratch[y1 * width + x])
                        / 3.0;
            }
        }
    }
    let mean = field.iter().sum::<f64>() / field.len() as f64;
    let var = field.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / field.len() as f64;
    let sd = var.sqrt().max(1e-12);
    for v in field.iter_mut() {
        *v = (*v - mean) / sd;
    }
    field
}

/// Deterministic natural-image stand-in, affinely mapped into [8, 247].
/// Color channels share the geometry with small per-channel gains.
pub fn synth_image(width: usize, height: usize, channels: usize, seed: u64) -> Image {
    let mut rng = SplitMix64::new(seed ^ 0xA5A5_5A5A_DEAD_BEEF);
    let min_dim = width.min(height) as f64;
    let n = width * height;

    // Noise octaves with amplitude proportional to blur radius: an
    // approximately 1/f spectrum, scale-invariant the way photographs are.
    let octaves: [(usize, f64); 5] = [(1, 0.7), (4, 2.4), (16, 4.8), (64, 9.6), (256, 19.2)];
    let mut structure = vec![0.0f64; n];
    for &(passes, amp) in &octaves {
        let octave = noise_octave(width, height, passes, &mut rng);
        for (acc, v) in structure.iter_mut().zip(&octave) {
            *acc += amp * v;
        }
    }

    // Broad illumination gradient.
    let grad_angle = rng.next_f64() * std::f64::consts::PI;
    let (gx, gy) = (grad_angle.cos(), grad_angle.sin());
    let grad_amp = 10.0 + rng.next_f64() * 20.0;

    // Occluding regions ("dead leaves"): rotated ellipses with their own
    // base level and a soft boundary, composited back to front. These give
    // the piecewise-smooth structure and curved step edges of photographs.
    struct Leaf {
        cx: f64,
        cy: f64,
        ra: f64,
        rb: f64,
        cos_t: f64,
        sin_t: f64,
        level: f64,
        softness: f64,
    }
    // Log-uniform sizes give the power-law occlusion statistics of real
    // scenes: a few large regions, many small ones with visible curvature.
    let n_leaves = 10 + (rng.next_f64() * 5.0) as usize;
    let mut leaves = Vec::with_capacity(n_leaves);
    for _ in 0..n_leaves {
        let theta = rng.next_f64() * std::f64::consts::PI;
        let scale = 0.035 * (0.45f64 / 0.035).powf(rng.next_f64());
        let aspect = 0.6 + rng.next_f64() * 0.8;
        leaves.push(Leaf {
            cx: rng.next_f64() * width as f64,
            cy: rng.next_f64() * height as f64,
            ra: min_dim * scale,
            rb: min_dim * scale * aspect,
            cos_t: theta.cos(),
            sin_t: theta.sin(),
            level: 30.0 + rng.next_f64() * 160.0,
            softness: 0.6 + rng.next_f64() * 2.4,
        });
    }
    let background = 30.0 + rng.next_f64() * 160.0;

    let channel_gain = [
        1.0,
        0.92 + rng.next_f64() * 0.16,
        0.88 + rng.next_f64() * 0.2,
    ];

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut values = vec![0.0f64; n];
    for y in 0..height {
        for x in 0..width {
            let (xf, yf) = (x as f64, y as f64);
            let mut v = background;
            for leaf in &leaves {
                // Approximate signed distance to the ellipse boundary in
                // pixels, negative inside.
                let dx = xf - leaf.cx;
                let dy = yf - leaf.cy;
                let u = (dx * leaf.cos_t + dy * leaf.sin_t) / leaf.ra;
                let w2 = (-dx * leaf.sin_t + dy * leaf.cos_t) / leaf.rb;
                let d = ((u * u + w2 * w2).sqrt() - 1.0) * leaf.ra.min(leaf.rb);
                let alpha = 1.0 / (1.0 + (d / leaf.softness).exp());
                v = v * (1.0 - alpha) + leaf.level * alpha;
            }
            v += structure[y * width + x];
            v += grad_amp * ((xf - width as f64 / 2.0) * gx + (yf - height as f64 / 2.0) * gy)
                / min_dim;
            lo = lo.min(v);
            hi = hi.max(v);
            values[y * width + x] = v;
        }
    }

    let span = (hi - lo).max(1e-9);
    Image::from_fn(width, height, channels, |x, y, c| {
        let unit = (values[y * width + x] - lo) / span;
        let gained = (unit - 0.5) * channel_gain[c] + 0.5;
        8.0 + gained.clamp(0.0, 1.0) * 239.0
    })
    .unwrap()
}

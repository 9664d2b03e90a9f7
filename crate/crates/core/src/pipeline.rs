//! End-to-end restoration: scale planning, multi-scale formation, per-scale
//! inpainting, up-sampling, and voting.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::inpaint::{inpaint_scale, InpaintParams};
use crate::maskgen::estimate_width;
use crate::metrics;
use crate::raster::{Image, Mask, RunReport};
use crate::resample::{downsample_mask, downsample_nearest, upsample_bicubic};
use crate::scalesel::{plan_scales, Strategy, Thickness};

/// Configuration for a multiscale run. `None` fields resolve to the
/// defaults: thickness estimated from the mask, scale count from the
/// floor-log2 rule, equal voting weights, and inpaint parameters derived
/// from the resolved thickness.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub strategy: Strategy,
    pub thickness: Option<Thickness>,
    pub scale_override: Option<u32>,
    pub weights: Option<Vec<f64>>,
    pub inpaint: Option<InpaintParams>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Pyramid,
            thickness: None,
            scale_override: None,
            weights: None,
            inpaint: None,
        }
    }
}

/// Weighted per-pixel average of the candidates on the missing region;
/// off-mask pixels are copied bit-exactly from `original`. Weights are
/// normalized to sum to 1.
pub fn vote(candidates: &[Image], mask: &Mask, original: &Image, weights: &[f64]) -> Result<Image> {
    if candidates.is_empty() {
        return Err(Error::BadWeights("no candidates to vote over".into()));
    }
    if weights.len() != candidates.len() {
        return Err(Error::BadWeights(format!(
            "{} weights for {} candidates",
            weights.len(),
            candidates.len()
        )));
    }
    for c in candidates {
        if !c.same_shape(original) {
            return Err(Error::ShapeMismatch(
                c.width(),
                c.height(),
                c.channels(),
                original.width(),
                original.height(),
                original.channels(),
            ));
        }
    }
    if original.width() != mask.width() || original.height() != mask.height() {
        return Err(Error::DimensionMismatch(
            original.width(),
            original.height(),
            mask.width(),
            mask.height(),
        ));
    }
    if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
        return Err(Error::BadWeights("weights must be finite and >= 0".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::BadWeights("weights must not all be zero".into()));
    }
    let norm: Vec<f64> = weights.iter().map(|w| w / total).collect();

    let mut out = original.clone();
    let channels = original.channels();
    for y in 0..original.height() {
        for x in 0..original.width() {
            if !mask.missing(x, y) {
                continue;
            }
            for c in 0..channels {
                let mut acc = 0.0;
                for (candidate, w) in candidates.iter().zip(&norm) {
                    acc += w * candidate.get(x, y, c);
                }
                out.set(x, y, c, acc.clamp(0.0, 255.0));
            }
        }
    }
    Ok(out)
}

/// Runs the full restoration: plan scales from the noise thickness, inpaint
/// each downsampled version independently, upsample every result back to
/// the original size, and vote. PSNR/SSIM fields of the report are filled
/// only when `reference` is supplied; the wall time covers computation
/// only, no file I/O.
pub fn run_multiscale(
    img: &Image,
    mask: &Mask,
    cfg: &PipelineConfig,
    reference: Option<&Image>,
) -> Result<(Image, RunReport)> {
    if img.width() != mask.width() || img.height() != mask.height() {
        return Err(Error::DimensionMismatch(
            img.width(),
            img.height(),
            mask.width(),
            mask.height(),
        ));
    }
    let n_missing = mask.count_missing();
    if n_missing == mask.width() * mask.height() {
        return Err(Error::AllPixelsMissing);
    }

    let start = Instant::now();

    let thickness = match cfg.thickness {
        Some(t) => t,
        // An empty mask has no width to estimate; any thickness makes the
        // run a no-op.
        None if n_missing == 0 => Thickness::new(1)?,
        None => estimate_width(mask)?,
    };
    let dims = (img.width(), img.height());
    let plan = plan_scales(thickness, cfg.strategy, cfg.scale_override, Some(dims));
    let params = cfg
        .inpaint
        .clone()
        .unwrap_or_else(|| InpaintParams::for_thickness(thickness, dims));

    let mut candidates = Vec::with_capacity(plan.factors.len());
    for &factor in &plan.factors {
        let scaled_img = downsample_nearest(img, factor)?;
        let scaled_mask = downsample_mask(mask, factor)?;
        let filled = inpaint_scale(&scaled_img, &scaled_mask, &params)?;
        candidates.push(upsample_bicubic(&filled, img.width(), img.height())?);
    }

    let weights = match &cfg.weights {
        Some(w) => w.clone(),
        None => vec![1.0 / candidates.len() as f64; candidates.len()],
    };
    let out = vote(&candidates, mask, img, &weights)?;
    let wall_seconds = start.elapsed().as_secs_f64();

    let (psnr_db, ssim) = match reference {
        Some(truth) => (
            Some(metrics::psnr(&out, truth)?),
            Some(metrics::ssim(&out, truth)?),
        ),
        None => (None, None),
    };
    let report = RunReport {
        psnr_db,
        ssim,
        wall_seconds,
        scale_factors: plan.factors,
        strategy: cfg.strategy,
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maskgen::{generate_scratches, ScratchSpec};

    fn test_image(w: usize, h: usize, seed: u64) -> Image {
        Image::from_fn(w, h, 1, |x, y, _| {
            let v = (x as f64 * 0.9 + y as f64 * 1.7 + seed as f64).sin() * 80.0 + 120.0;
            v.clamp(0.0, 255.0)
        })
        .unwrap()
    }

    fn scratch_mask(w: usize, h: usize, seed: u64) -> Mask {
        generate_scratches(
            w,
            h,
            &ScratchSpec {
                n_lines: 3,
                thickness: 3,
                min_len: 10,
                max_len: 30,
                seed,
            },
        )
        .unwrap()
    }

    #[test]
    fn vote_single_candidate_passes_through() {
        let original = test_image(8, 8, 0);
        let mask = scratch_mask(8, 8, 1);
        let candidate = Image::filled(8, 8, 1, 40.0).unwrap();
        let out = vote(std::slice::from_ref(&candidate), &mask, &original, &[1.0]).unwrap();
        for y in 0..8 {
            for x in 0..8 {
                if mask.missing(x, y) {
                    assert_eq!(out.get(x, y, 0), 40.0);
                } else {
                    assert_eq!(out.get(x, y, 0).to_bits(), original.get(x, y, 0).to_bits());
                }
            }
        }
    }

    #[test]
    fn vote_averages_with_equal_weights() {
        let original = Image::filled(4, 4, 1, 0.0).unwrap();
        let mask = Mask::new(4, 4, vec![true; 16]).unwrap();
        let a = Image::filled(4, 4, 1, 100.0).unwrap();
        let b = Image::filled(4, 4, 1, 120.0).unwrap();
        let out = vote(&[a, b], &mask, &original, &[0.5, 0.5]).unwrap();
        assert_eq!(out.get(2, 2, 0), 110.0);
    }

    #[test]
    fn vote_weighted_sum_example() {
        let original = Image::filled(2, 2, 1, 0.0).unwrap();
        let mask = Mask::new(2, 2, vec![true; 4]).unwrap();
        let a = Image::filled(2, 2, 1, 80.0).unwrap();
        let b = Image::filled(2, 2, 1, 120.0).unwrap();
        let c = Image::filled(2, 2, 1, 120.0).unwrap();
        let out = vote(&[a, b, c], &mask, &original, &[0.5, 0.25, 0.25]).unwrap();
        assert_eq!(out.get(0, 0, 0), 100.0);
    }

    #[test]
    fn vote_rejects_weight_count_mismatch() {
        let original = Image::filled(2, 2, 1, 0.0).unwrap();
        let mask = Mask::all_known(2, 2).unwrap();
        let a = Image::filled(2, 2, 1, 1.0).unwrap();
        assert!(matches!(
            vote(&[a], &mask, &original, &[0.5, 0.5]),
            Err(Error::BadWeights(_))
        ));
    }

    #[test]
    fn single_scale_config_matches_inpaint_scale_bitwise() {
        let img = test_image(20, 14, 3);
        let mask = scratch_mask(20, 14, 4);
        let cfg = PipelineConfig {
            scale_override: Some(0),
            thickness: Some(Thickness::new(3).unwrap()),
            ..Default::default()
        };
        let (out, report) = run_multiscale(&img, &mask, &cfg, None).unwrap();
        assert_eq!(report.scale_factors, vec![1]);
        let params = InpaintParams::for_thickness(Thickness::new(3).unwrap(), (20, 14));
        let direct = inpaint_scale(&img, &mask, &params).unwrap();
        assert_eq!(out, direct);
    }

    #[test]
    fn constant_image_survives_any_config() {
        let img = Image::filled(32, 32, 3, 77.0).unwrap();
        let mask = scratch_mask(32, 32, 9);
        for strategy in [Strategy::Pyramid, Strategy::Integer] {
            let cfg = PipelineConfig {
                strategy,
                thickness: Some(Thickness::new(5).unwrap()),
                ..Default::default()
            };
            let (out, _) = run_multiscale(&img, &mask, &cfg, None).unwrap();
            for &v in out.samples() {
                assert!((v - 77.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn pyramid_w5_votes_three_candidates() {
        let img = test_image(64, 64, 5);
        let mask = scratch_mask(64, 64, 6);
        let cfg = PipelineConfig {
            thickness: Some(Thickness::new(5).unwrap()),
            ..Default::default()
        };
        let (_, report) = run_multiscale(&img, &mask, &cfg, None).unwrap();
        assert_eq!(report.scale_factors, vec![1, 2, 4]);
    }

    #[test]
    fn off_mask_pixels_survive_pipeline_bit_exactly() {
        let img = Image::from_fn(40, 30, 3, |x, y, c| {
            (((x * 13 + y * 31 + c * 101) % 2551) as f64) / 10.0
        })
        .unwrap();
        let mask = scratch_mask(40, 30, 11);
        let (out, _) = run_multiscale(&img, &mask, &PipelineConfig::default(), None).unwrap();
        for y in 0..30 {
            for x in 0..40 {
                if !mask.missing(x, y) {
                    for c in 0..3 {
                        assert_eq!(out.get(x, y, c).to_bits(), img.get(x, y, c).to_bits());
                    }
                }
            }
        }
    }

    #[test]
    fn vote_is_idempotent_for_identical_candidates() {
        let original = Image::filled(6, 6, 1, 0.0).unwrap();
        let mask = Mask::new(6, 6, vec![true; 36]).unwrap();
        let candidate =
            Image::from_fn(6, 6, 1, |x, y, _| (x as f64 * 9.7 + y as f64).min(255.0)).unwrap();
        let three = vec![candidate.clone(); 3];
        let out = vote(&three, &mask, &original, &[1.0, 1.0, 1.0]).unwrap();
        for (a, b) in out.samples().iter().zip(candidate.samples()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn voted_values_stay_within_candidate_hull() {
        let original = Image::filled(4, 4, 1, 0.0).unwrap();
        let mask = Mask::new(4, 4, vec![true; 16]).unwrap();
        let a = Image::filled(4, 4, 1, 30.0).unwrap();
        let b = Image::filled(4, 4, 1, 90.0).unwrap();
        let c = Image::filled(4, 4, 1, 60.0).unwrap();
        let out = vote(&[a, b, c], &mask, &original, &[0.2, 0.5, 0.3]).unwrap();
        for &v in out.samples() {
            assert!((30.0..=90.0).contains(&v));
        }
    }

    #[test]
    fn empty_mask_is_identity_even_with_auto_thickness() {
        let img = test_image(16, 16, 1);
        let mask = Mask::all_known(16, 16).unwrap();
        let (out, _) = run_multiscale(&img, &mask, &PipelineConfig::default(), None).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn all_missing_mask_is_rejected() {
        let img = test_image(8, 8, 0);
        let mask = Mask::new(8, 8, vec![true; 64]).unwrap();
        assert!(matches!(
            run_multiscale(&img, &mask, &PipelineConfig::default(), None),
            Err(Error::AllPixelsMissing)
        ));
    }

    #[test]
    fn report_metrics_filled_only_with_reference() {
        let img = test_image(24, 24, 8);
        let mask = scratch_mask(24, 24, 2);
        let cfg = PipelineConfig::default();
        let (_, bare) = run_multiscale(&img, &mask, &cfg, None).unwrap();
        assert!(bare.psnr_db.is_none() && bare.ssim.is_none());
        let (_, scored) = run_multiscale(&img, &mask, &cfg, Some(&img)).unwrap();
        assert!(scored.psnr_db.is_some() && scored.ssim.is_some());
        assert!(scored.wall_seconds >= 0.0);
    }
}

//! Single-scale adaptive inpainting: per-pixel directional prediction with
//! variable-degree splines in four directions, horizontal/vertical edge
//! detection, and fusion of the directional estimates.
//!
//! Missing pixels are filled in buffered passes. Pass 1 predicts every
//! missing pixel from originally-known pixels only, writing to a separate
//! buffer so the visit order cannot matter. Pixels with no reachable known
//! sample are deferred; later passes may use values filled by earlier
//! passes. Whatever remains after `max_passes` falls back to the per-channel
//! mean of the known pixels.

use crate::error::{Error, Result};
use crate::raster::{Image, Mask};
use crate::scalesel::Thickness;

/// One of the four interpolation rays. The step is the signed per-step
/// offset in (x, y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Horizontal,
    Vertical,
    Diag45,
    Diag135,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Horizontal,
        Direction::Vertical,
        Direction::Diag45,
        Direction::Diag135,
    ];

    #[inline]
    pub fn step(self) -> (i64, i64) {
        match self {
            Direction::Horizontal => (1, 0),
            Direction::Vertical => (0, 1),
            Direction::Diag45 => (1, -1),
            Direction::Diag135 => (1, 1),
        }
    }
}

/// Known samples gathered along one ray: (signed step offset, value), with
/// strictly increasing offsets, offset 0 excluded, and at most two samples
/// per side.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RaySamples {
    points: Vec<(i64, f64)>,
}

impl RaySamples {
    /// Validating constructor, mainly for tests; `collect_ray_samples`
    /// builds these directly.
    pub fn from_points(points: Vec<(i64, f64)>) -> Result<Self> {
        if points.len() > 4 {
            return Err(Error::BadRaySamples("more than 4 points".into()));
        }
        if points.iter().any(|p| p.0 == 0) {
            return Err(Error::BadRaySamples("offset 0 is the pixel itself".into()));
        }
        if !points.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::BadRaySamples(
                "offsets must strictly increase".into(),
            ));
        }
        for sign in [-1i64, 1] {
            if points.iter().filter(|p| p.0.signum() == sign).count() > 2 {
                return Err(Error::BadRaySamples("more than 2 points per side".into()));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(i64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One directional estimate. `valid == false` means the ray had no usable
/// sample and fusion must ignore `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionalPrediction {
    pub value: f64,
    pub valid: bool,
    pub n_samples: usize,
}

impl DirectionalPrediction {
    pub const INVALID: DirectionalPrediction = DirectionalPrediction {
        value: 0.0,
        valid: false,
        n_samples: 0,
    };
}

/// Detected local edge orientation around a pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLabel {
    None,
    Horizontal,
    Vertical,
    Both,
}

/// Tuning knobs for single-scale inpainting.
#[derive(Debug, Clone, PartialEq)]
pub struct InpaintParams {
    /// Ray search limit in steps per side.
    pub max_reach: usize,
    /// Odd edge-detection window size, at least 3.
    pub edge_window: usize,
    /// Mean-absolute-gradient threshold on the 0-255 scale.
    pub edge_threshold: f64,
    /// Outlier rejection distance from the median of the directional values.
    pub outlier_tau: f64,
    /// Cap on fill passes before the mean fallback.
    pub max_passes: usize,
}

impl Default for InpaintParams {
    fn default() -> Self {
        Self {
            max_reach: 12,
            edge_window: 5,
            edge_threshold: 20.0,
            outlier_tau: 25.0,
            max_passes: 10,
        }
    }
}

impl InpaintParams {
    /// Defaults derived from the noise thickness: reach of 2w + 2 (bounded
    /// by the image diagonal) and at least as many passes as the stroke is
    /// wide.
    pub fn for_thickness(thickness: Thickness, dims: (usize, usize)) -> Self {
        let w = thickness.get() as usize;
        let (iw, ih) = dims;
        let diag = (((iw * iw + ih * ih) as f64).sqrt().ceil() as usize).max(1);
        Self {
            max_reach: (2 * w + 2).min(diag),
            max_passes: w.max(10),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_reach < 1 {
            return Err(Error::BadInpaintParams("max_reach must be >= 1".into()));
        }
        if self.edge_window < 3 || self.edge_window.is_multiple_of(2) {
            return Err(Error::BadInpaintParams(
                "edge_window must be odd and >= 3".into(),
            ));
        }
        if self.edge_threshold <= 0.0 || self.outlier_tau <= 0.0 {
            return Err(Error::BadInpaintParams(
                "thresholds must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Walks outward from (x, y) in both signed directions along `dir`,
/// collecting the first up to two known pixels per side within `max_reach`
/// steps and within bounds. Offsets are signed step counts from the center.
pub fn collect_ray_samples(
    img: &Image,
    known: &[bool],
    x: usize,
    y: usize,
    dir: Direction,
    max_reach: usize,
    channel: usize,
) -> RaySamples {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let (dx, dy) = dir.step();
    let mut neg: Vec<(i64, f64)> = Vec::with_capacity(2);
    let mut pos: Vec<(i64, f64)> = Vec::with_capacity(2);
    for sign in [-1i64, 1] {
        let side = if sign < 0 { &mut neg } else { &mut pos };
        for step in 1..=max_reach as i64 {
            let off = sign * step;
            let px = x as i64 + dx * off;
            let py = y as i64 + dy * off;
            if px < 0 || px >= w || py < 0 || py >= h {
                break;
            }
            if known[(py * w + px) as usize] {
                side.push((off, img.get(px as usize, py as usize, channel)));
                if side.len() == 2 {
                    break;
                }
            }
        }
    }
    neg.reverse();
    neg.extend(pos);
    RaySamples { points: neg }
}

fn lagrange_at_zero(points: &[(i64, f64)]) -> f64 {
    let mut acc = 0.0;
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut basis = 1.0;
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                basis *= (0 - xj) as f64 / (xi - xj) as f64;
            }
        }
        acc += yi * basis;
    }
    acc
}

/// Predicts the center value from ray samples with a polynomial whose
/// degree adapts to the sample count: 4 points give a cubic, 3 a quadratic,
/// 2 a line, 1 a copy. Pure extrapolation (all samples on one side) is
/// clamped to the sample range; every result is clamped to `[0, 255]`.
pub fn spline_predict(samples: &RaySamples) -> DirectionalPrediction {
    let points = samples.points();
    if points.is_empty() {
        return DirectionalPrediction::INVALID;
    }
    let mut value = lagrange_at_zero(points);
    let one_sided = points.iter().all(|p| p.0 < 0) || points.iter().all(|p| p.0 > 0);
    if one_sided {
        let lo = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        value = value.clamp(lo, hi);
    }
    DirectionalPrediction {
        value: value.clamp(0.0, 255.0),
        valid: true,
        n_samples: points.len(),
    }
}

/// Classifies the local edge orientation from mean absolute adjacent
/// differences of known-pixel pairs inside the window centered at (x, y).
/// Gy above threshold (with Gx below) means intensity changes across rows,
/// i.e. the edge runs horizontally. Luma is used for color images. A
/// direction with fewer than two valid pairs contributes a zero gradient.
pub fn detect_edge(
    img: &Image,
    known: &[bool],
    x: usize,
    y: usize,
    params: &InpaintParams,
) -> EdgeLabel {
    let (w, h) = (img.width(), img.height());
    let half = params.edge_window / 2;
    let x0 = x.saturating_sub(half);
    let x1 = (x + half).min(w - 1);
    let y0 = y.saturating_sub(half);
    let y1 = (y + half).min(h - 1);

    let mut sum_x = 0.0;
    let mut n_x = 0usize;
    let mut sum_y = 0.0;
    let mut n_y = 0usize;
    for wy in y0..=y1 {
        for wx in x0..=x1 {
            if !known[wy * w + wx] {
                continue;
            }
            let l = img.luma_at(wx, wy);
            if wx < x1 && known[wy * w + wx + 1] {
                sum_x += (img.luma_at(wx + 1, wy) - l).abs();
                n_x += 1;
            }
            if wy < y1 && known[(wy + 1) * w + wx] {
                sum_y += (img.luma_at(wx, wy + 1) - l).abs();
                n_y += 1;
            }
        }
    }
    let gx = if n_x >= 2 { sum_x / n_x as f64 } else { 0.0 };
    let gy = if n_y >= 2 { sum_y / n_y as f64 } else { 0.0 };

    match (gx > params.edge_threshold, gy > params.edge_threshold) {
        (true, true) => EdgeLabel::Both,
        (false, true) => EdgeLabel::Horizontal,
        (true, false) => EdgeLabel::Vertical,
        (false, false) => EdgeLabel::None,
    }
}

fn median_of_sorted(vals: &[f64]) -> f64 {
    let n = vals.len();
    if n % 2 == 1 {
        vals[n / 2]
    } else {
        0.5 * (vals[n / 2 - 1] + vals[n / 2])
    }
}

/// Fuses the four directional predictions (indexed as `Direction::ALL`).
///
/// On a detected edge the prediction along the edge wins; `Both` averages
/// the horizontal and vertical predictions. Otherwise predictions farther
/// than `tau` from the median are discarded (unless that would discard
/// everything) and the survivors are averaged. Returns `None` when no
/// prediction is valid — the caller defers the pixel.
pub fn fuse(preds: &[DirectionalPrediction; 4], edge: EdgeLabel, tau: f64) -> Option<f64> {
    let horizontal = preds[0];
    let vertical = preds[1];
    match edge {
        EdgeLabel::Horizontal if horizontal.valid => return Some(horizontal.value),
        EdgeLabel::Vertical if vertical.valid => return Some(vertical.value),
        EdgeLabel::Both => {
            let axis: Vec<f64> = [horizontal, vertical]
                .iter()
                .filter(|p| p.valid)
                .map(|p| p.value)
                .collect();
            if !axis.is_empty() {
                return Some(axis.iter().sum::<f64>() / axis.len() as f64);
            }
        }
        _ => {}
    }

    let mut vals: Vec<f64> = preds.iter().filter(|p| p.valid).map(|p| p.value).collect();
    if vals.is_empty() {
        return None;
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = median_of_sorted(&vals);
    let survivors: Vec<f64> = vals
        .iter()
        .copied()
        .filter(|v| (v - median).abs() <= tau)
        .collect();
    let pool = if survivors.is_empty() {
        &vals
    } else {
        &survivors
    };
    Some(pool.iter().sum::<f64>() / pool.len() as f64)
}

/// Fills every missing pixel of `img` at a single scale. Known pixels are
/// copied bit-exactly; channels are predicted independently while the edge
/// label is shared through luma.
pub fn inpaint_scale(img: &Image, mask: &Mask, params: &InpaintParams) -> Result<Image> {
    if img.width() != mask.width() || img.height() != mask.height() {
        return Err(Error::DimensionMismatch(
            img.width(),
            img.height(),
            mask.width(),
            mask.height(),
        ));
    }
    params.validate()?;
    let (w, h, channels) = (img.width(), img.height(), img.channels());
    let n_missing = mask.count_missing();
    if n_missing == w * h {
        return Err(Error::AllPixelsMissing);
    }
    let mut out = img.clone();
    if n_missing == 0 {
        return Ok(out);
    }

    let mut known: Vec<bool> = mask.bits().iter().map(|&b| !b).collect();

    // Per-channel fallback: mean of the originally-known pixels.
    let mut mean = [0.0f64; 3];
    let n_known = (w * h - n_missing) as f64;
    for y in 0..h {
        for x in 0..w {
            if known[y * w + x] {
                for (c, m) in mean.iter_mut().enumerate().take(channels) {
                    *m += img.get(x, y, c);
                }
            }
        }
    }
    for m in mean.iter_mut() {
        *m /= n_known;
    }

    let mut remaining: Vec<usize> = (0..w * h).filter(|&i| mask.bits()[i]).collect();

    for _pass in 0..params.max_passes {
        if remaining.is_empty() {
            break;
        }
        let mut updates: Vec<(usize, [f64; 3])> = Vec::with_capacity(remaining.len());
        let mut deferred: Vec<usize> = Vec::new();
        for &idx in &remaining {
            let (x, y) = (idx % w, idx / w);
            let edge = detect_edge(&out, &known, x, y, params);
            let mut vals = [0.0f64; 3];
            let mut resolved = true;
            for (c, val) in vals.iter_mut().enumerate().take(channels) {
                let preds = Direction::ALL.map(|dir| {
                    spline_predict(&collect_ray_samples(
                        &out,
                        &known,
                        x,
                        y,
                        dir,
                        params.max_reach,
                        c,
                    ))
                });
                match fuse(&preds, edge, params.outlier_tau) {
                    Some(v) => *val = v,
                    None => {
                        resolved = false;
                        break;
                    }
                }
            }
            if resolved {
                updates.push((idx, vals));
            } else {
                deferred.push(idx);
            }
        }
        let progressed = !updates.is_empty();
        for (idx, vals) in updates {
            let (x, y) = (idx % w, idx / w);
            for (c, &v) in vals.iter().enumerate().take(channels) {
                out.set(x, y, c, v);
            }
            known[idx] = true;
        }
        remaining = deferred;
        if !progressed {
            // The known set did not grow; later passes cannot do better.
            break;
        }
    }

    for &idx in &remaining {
        let (x, y) = (idx % w, idx / w);
        for (c, &m) in mean.iter().enumerate().take(channels) {
            out.set(x, y, c, m);
        }
    }
    Ok(out)
}

//! Scale-count selection from mask-line thickness, and downscale-factor
//! planning under the pyramid and integer strategies.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How downscale factors are generated: successive powers of two, or
/// successive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Pyramid,
    Integer,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Pyramid => "pyramid",
            Strategy::Integer => "integer",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pyramid" => Ok(Strategy::Pyramid),
            "integer" => Ok(Strategy::Integer),
            other => Err(format!(
                "unknown strategy '{other}', expected pyramid or integer"
            )),
        }
    }
}

/// Width of the noise lines in pixels, at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Thickness(u32);

impl Thickness {
    pub fn new(w: u32) -> Result<Self> {
        if w < 1 {
            return Err(Error::BadThickness);
        }
        Ok(Self(w))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Thickness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered list of integer downscale factors. The first factor is always 1:
/// the original image always participates in voting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalePlan {
    pub strategy: Strategy,
    pub factors: Vec<usize>,
}

impl ScalePlan {
    /// Number of additional downscaled levels beyond the original image.
    pub fn extra_levels(&self) -> usize {
        self.factors.len() - 1
    }
}

/// Maximum number of additional scales for the pyramid strategy:
/// floor(log2 w).
pub fn max_scales_pyramid(w: Thickness) -> u32 {
    w.get().ilog2()
}

/// Maximum number of additional scales for the integer strategy: w - 1.
pub fn max_scales_integer(w: Thickness) -> u32 {
    w.get() - 1
}

fn factor_for(strategy: Strategy, level: u32) -> usize {
    match strategy {
        Strategy::Pyramid => 1usize << level.min(62),
        Strategy::Integer => level as usize + 1,
    }
}

/// Produces the ordered factor list for `strategy`.
///
/// The number of additional downscaled levels is `override_count` when
/// given, otherwise floor(log2 w) — the recommended count for either
/// strategy. When `image_dims` is supplied the count is clamped so that no
/// factor exceeds min(width, height) / 8, which keeps every level at least
/// 8 pixels on its short side.
pub fn plan_scales(
    w: Thickness,
    strategy: Strategy,
    override_count: Option<u32>,
    image_dims: Option<(usize, usize)>,
) -> ScalePlan {
    let mut n = override_count.unwrap_or_else(|| max_scales_pyramid(w));
    if let Some((iw, ih)) = image_dims {
        let limit = (iw.min(ih) / 8).max(1);
        while n > 0 && factor_for(strategy, n) > limit {
            n -= 1;
        }
    }
    let factors = (0..=n).map(|level| factor_for(strategy, level)).collect();
    ScalePlan { strategy, factors }
}

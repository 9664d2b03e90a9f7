//! Restoration of scratch- and crease-damaged raster images by multiscale
//! directional spline interpolation.
//!
//! The method plans a set of integer downscale factors from the stroke
//! width of the damage, inpaints each downsampled version independently
//! with variable-degree directional splines, upsamples every result back
//! to the original size with a Catmull-Rom bicubic, and averages the
//! candidates at each damaged pixel. The crate also provides the pixmap
//! I/O, synthetic scratch masks, and PSNR/SSIM metrics used by the
//! benchmark front end.

pub mod error;
pub mod inpaint;
pub mod maskgen;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod resample;
pub mod scalesel;

pub use error::{Error, Result};
pub use inpaint::{inpaint_scale, InpaintParams};
pub use pipeline::{run_multiscale, vote, PipelineConfig};
pub use raster::{load_image, load_mask, save_image, save_mask, Image, Mask, RunReport};
pub use scalesel::{plan_scales, ScalePlan, Strategy, Thickness};

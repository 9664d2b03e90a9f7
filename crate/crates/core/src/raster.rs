//! Core raster types and binary pixmap (P5/P6) I/O.
//!
//! Samples are stored as `f64` in `[0, 255]` rather than normalized to
//! `[0, 1]` so the 255 peak used by PSNR reads directly. Quantization on
//! save is round-half-up followed by a clamp, which makes save/load a
//! byte-exact round trip for integer-valued images.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalesel::Strategy;

/// W×H×C raster of real-valued samples in `[0, 255]`, row-major and
/// channel-interleaved. Channels is 1 (gray) or 3 (RGB).
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<f64>,
}

impl Image {
    /// Builds an image after validating dimensions, channel count, buffer
    /// length, and that every sample is finite and in `[0, 255]`.
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadDimensions { width, height });
        }
        if channels != 1 && channels != 3 {
            return Err(Error::BadChannels(channels));
        }
        let want = width * height * channels;
        if samples.len() != want {
            return Err(Error::BadBufferLength {
                want,
                got: samples.len(),
            });
        }
        if let Some(&bad) = samples
            .iter()
            .find(|s| !s.is_finite() || **s < 0.0 || **s > 255.0)
        {
            return Err(Error::SampleOutOfRange(bad));
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    /// Constant-valued image.
    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    /// Builds an image from a per-pixel function returning one value per channel.
    pub fn from_fn<F>(width: usize, height: usize, channels: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize, usize) -> f64,
    {
        let mut samples = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    samples.push(f(x, y, c));
                }
            }
        }
        Self::new(width, height, channels, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        debug_assert!(x < self.width && y < self.height && c < self.channels);
        self.samples[(y * self.width + x) * self.channels + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        debug_assert!(v.is_finite() && (0.0..=255.0).contains(&v));
        self.samples[(y * self.width + x) * self.channels + c] = v;
    }

    /// Rec. 601 luma; for single-channel images this is the sample itself.
    #[inline]
    pub fn luma_at(&self, x: usize, y: usize) -> f64 {
        if self.channels == 1 {
            self.get(x, y, 0)
        } else {
            0.299 * self.get(x, y, 0) + 0.587 * self.get(x, y, 1) + 0.114 * self.get(x, y, 2)
        }
    }

    /// True when both images have equal width, height and channel count.
    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }
}

/// W×H boolean grid, row-major; `true` marks a missing (damaged) pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadDimensions { width, height });
        }
        let want = width * height;
        if bits.len() != want {
            return Err(Error::BadBufferLength {
                want,
                got: bits.len(),
            });
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    /// Mask with every pixel known.
    pub fn all_known(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn missing(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.width && y < self.height);
        self.bits[y * self.width + x]
    }

    pub fn count_missing(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Per-run metrics record. `psnr_db` and `ssim` are filled only when a
/// ground-truth image was supplied; `wall_seconds` times the pipeline
/// computation exclusive of file I/O.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub psnr_db: Option<f64>,
    pub ssim: Option<f64>,
    pub wall_seconds: f64,
    pub scale_factors: Vec<usize>,
    pub strategy: Strategy,
}

// ---------------------------------------------------------------------------
// Binary pixmap codec (P5 grayscale / P6 color, maxval 255)
// ---------------------------------------------------------------------------

struct PnmHeader {
    color: bool,
    width: usize,
    height: usize,
    payload_start: usize,
}

/// Parses a P5/P6 header: magic, width, height, maxval, then exactly one
/// whitespace byte before the payload. `#` comments are tolerated between
/// tokens, as produced by common editors.
fn parse_header(bytes: &[u8]) -> Result<PnmHeader> {
    let color = match bytes.get(..2) {
        Some(b"P5") => false,
        Some(b"P6") => true,
        _ => return Err(Error::MalformedHeader("missing P5/P6 magic".into())),
    };
    let mut pos = 2;
    let mut fields = [0u64; 3];
    for field in fields.iter_mut() {
        pos = skip_separators(bytes, pos)?;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == start {
            return Err(Error::MalformedHeader("expected an integer field".into()));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader("integer field out of range".into()))?;
    }
    if fields[2] != 255 {
        return Err(Error::UnsupportedMaxval(fields[2]));
    }
    let (width, height) = (fields[0] as usize, fields[1] as usize);
    if width == 0 || height == 0 {
        return Err(Error::BadDimensions { width, height });
    }
    // Single whitespace byte terminates the header.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => {
            return Err(Error::MalformedHeader(
                "missing whitespace after maxval".into(),
            ))
        }
    }
    Ok(PnmHeader {
        color,
        width,
        height,
        payload_start: pos,
    })
}

fn skip_separators(bytes: &[u8], mut pos: usize) -> Result<usize> {
    loop {
        match bytes.get(pos) {
            Some(b) if b.is_ascii_whitespace() => pos += 1,
            Some(b'#') => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            Some(_) => return Ok(pos),
            None => return Err(Error::MalformedHeader("header ended early".into())),
        }
    }
}

fn payload<'a>(bytes: &'a [u8], header: &PnmHeader) -> Result<&'a [u8]> {
    let channels = if header.color { 3 } else { 1 };
    let expected = header.width * header.height * channels;
    let avail = bytes.len() - header.payload_start;
    if avail < expected {
        return Err(Error::TruncatedPayload {
            expected,
            found: avail,
        });
    }
    Ok(&bytes[header.payload_start..header.payload_start + expected])
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a binary pixmap as an image; P5 gives 1 channel, P6 gives 3.
/// Byte values map to reals without scaling (`v -> v as f64`).
pub fn load_image(path: &Path) -> Result<Image> {
    let bytes = read_file(path)?;
    let header = parse_header(&bytes)?;
    let data = payload(&bytes, &header)?;
    let channels = if header.color { 3 } else { 1 };
    let samples = data.iter().map(|&b| b as f64).collect();
    Image::new(header.width, header.height, channels, samples)
}

/// Quantizes one sample: round half-up, then clamp to `[0, 255]`.
#[inline]
pub fn quantize(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Writes the image as P5 (1 channel) or P6 (3 channels), maxval 255.
pub fn save_image(img: &Image, path: &Path) -> Result<()> {
    let magic: &[u8] = if img.channels() == 3 { b"P6" } else { b"P5" };
    let mut out = Vec::with_capacity(img.samples().len() + 32);
    out.extend_from_slice(magic);
    out.push(b'\n');
    out.extend_from_slice(format!("{} {}\n255\n", img.width(), img.height()).as_bytes());
    out.extend(img.samples().iter().map(|&v| quantize(v)));
    fs::write(path, out).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a P5 pixmap as a mask: value >= 128 means missing.
pub fn load_mask(path: &Path) -> Result<Mask> {
    let bytes = read_file(path)?;
    let header = parse_header(&bytes)?;
    if header.color {
        return Err(Error::MalformedHeader("mask must be a P5 graymap".into()));
    }
    let data = payload(&bytes, &header)?;
    let bits = data.iter().map(|&b| b >= 128).collect();
    Mask::new(header.width, header.height, bits)
}

/// Writes a mask as P5: missing -> 255, known -> 0.
pub fn save_mask(mask: &Mask, path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(mask.bits().len() + 32);
    out.extend_from_slice(b"P5\n");
    out.extend_from_slice(format!("{} {}\n255\n", mask.width(), mask.height()).as_bytes());
    out.extend(mask.bits().iter().map(|&b| if b { 255u8 } else { 0u8 }));
    fs::write(path, out).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

//! HDR tone mapping by base/detail decomposition in log luminance.
//!
//! The base layer (large-scale brightness) is compressed by a factor
//! `c` in `(0, 1)` while the detail layer passes through unchanged:
//! `out_log = c * base + (log L - base)`. Working in log10 luminance keeps
//! the compression perceptually even across decades of radiance; applying
//! the same split to raw radiance would let the brightest areas swamp
//! everything else. The effective `c` is capped so the output log-range
//! does not exceed the display contrast target.

use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::image::ImageF;

use super::luminance;

#[derive(Debug, Clone, PartialEq)]
pub struct ToneMapParams {
    /// Base-layer compression factor in (0, 1).
    pub compression: f64,
    /// Display contrast target; the effective compression is lowered until
    /// the output log-range fits within `log10(target_contrast)`.
    pub target_contrast: f64,
    /// Filter producing the base layer from log luminance (self-guided).
    pub filter: Filter,
}

impl ToneMapParams {
    pub fn new(compression: f64, filter: Filter) -> Self {
        ToneMapParams {
            compression,
            target_contrast: 100.0,
            filter,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.compression > 0.0 && self.compression < 1.0) {
            return Err(Error::param(format!(
                "compression must lie in (0, 1), got {}",
                self.compression
            )));
        }
        if !(self.target_contrast > 1.0) {
            return Err(Error::param("target_contrast must be > 1"));
        }
        self.filter.validate()
    }

    /// The compression actually applied for an input log-range: never
    /// larger than requested, and never compressing an image that already
    /// fits the display range.
    pub fn effective_compression(&self, log_range: f64) -> f64 {
        if log_range <= 0.0 {
            return self.compression;
        }
        let cap = self.target_contrast.log10() / log_range;
        if cap >= 1.0 {
            // Already within display range; requested value stands.
            self.compression
        } else {
            self.compression.min(cap)
        }
    }
}

const RADIANCE_FLOOR: f64 = 1e-6;

/// Tone-map a single radiance plane. Returns the display image in `[0, 1]`
/// (max-normalized, raw otherwise) and the effective compression used.
pub fn tone_map_gray(radiance: &ImageF, params: &ToneMapParams) -> Result<(ImageF, f64)> {
    params.validate()?;
    radiance.ensure_finite()?;
    if radiance.max_value() <= 0.0 {
        return Err(Error::param(
            "tone mapping needs strictly positive radiance somewhere",
        ));
    }
    let log_l = radiance.map(|v| v.max(RADIANCE_FLOOR).log10());
    let base = params.filter.run_self(&log_l)?;
    let log_range = log_l.max_value() - log_l.min_value();
    let c = params.effective_compression(log_range);
    let out_log = ImageF::from_fn(log_l.width(), log_l.height(), |x, y| {
        let b = base.get(x, y);
        c * b + (log_l.get(x, y) - b)
    });
    let out = out_log.map(|v| 10f64.powf(v));
    let max = out.max_value();
    Ok((out.scale(1.0 / max), c))
}

/// Tone-map an RGB radiance triplet: the curve is computed on luminance and
/// each channel is rescaled by the per-pixel luminance ratio.
pub fn tone_map_rgb(rgb: &[ImageF; 3], params: &ToneMapParams) -> Result<([ImageF; 3], f64)> {
    params.validate()?;
    for plane in rgb {
        plane.ensure_finite()?;
    }
    let lum = luminance(rgb);
    let (mapped, c) = tone_map_gray(&lum, params)?;
    let out = [0, 1, 2].map(|i| {
        ImageF::from_fn(lum.width(), lum.height(), |x, y| {
            let l = lum.get(x, y).max(RADIANCE_FLOOR);
            (rgb[i].get(x, y) / l * mapped.get(x, y)).clamp(0.0, 1.0)
        })
    });
    Ok((out, c))
}

//! Single-image dehazing: dark-channel transmission estimate under the
//! atmospheric scattering model, refined by guided filtering against the
//! hazy image's luminance, then inverted to recover scene radiance.

use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::image::{BorderPolicy, ImageF};

use super::luminance;

#[derive(Debug, Clone, PartialEq)]
pub struct DehazeParams {
    /// Dark-channel erosion radius; the patch is `(2r+1) x (2r+1)`.
    pub patch_radius: usize,
    /// Fraction of haze deliberately kept for depth perception, in (0, 1].
    pub omega: f64,
    /// Transmission floor preventing division blow-up in dense haze.
    pub t0: f64,
    /// Fraction of brightest dark-channel pixels used to estimate the
    /// atmospheric light.
    pub airlight_quantile: f64,
    /// Guided filter refining the raw transmission map.
    pub filter: Filter,
}

impl Default for DehazeParams {
    fn default() -> Self {
        DehazeParams {
            patch_radius: 7,
            omega: 0.95,
            t0: 0.1,
            airlight_quantile: 0.001,
            filter: Filter::from_name("gh-gif", 20, 1e-4).unwrap(),
        }
    }
}

impl DehazeParams {
    pub fn validate(&self) -> Result<()> {
        if self.patch_radius < 1 {
            return Err(Error::param("patch_radius must be >= 1"));
        }
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(Error::param(format!(
                "omega must lie in (0, 1], got {}",
                self.omega
            )));
        }
        if !(self.t0 > 0.0 && self.t0 < 1.0) {
            return Err(Error::param(format!("t0 must lie in (0, 1), got {}", self.t0)));
        }
        if !(self.airlight_quantile > 0.0 && self.airlight_quantile <= 1.0) {
            return Err(Error::param("airlight_quantile must lie in (0, 1]"));
        }
        self.filter.validate()
    }
}

/// Everything the pipeline produces, kept for inspection and testing.
#[derive(Debug, Clone)]
pub struct DehazeOutput {
    /// Recovered scene radiance, raw (clamp on export).
    pub recovered: [ImageF; 3],
    /// Transmission before refinement.
    pub transmission_raw: ImageF,
    /// Transmission after guided refinement.
    pub transmission_refined: ImageF,
    /// Estimated atmospheric light per channel.
    pub airlight: [f64; 3],
}

/// Grayscale erosion: minimum over the `(2r+1) x (2r+1)` patch.
fn min_filter(src: &ImageF, r: usize) -> ImageF {
    let border = BorderPolicy::Replicate;
    let (w, h) = (src.width(), src.height());
    // Separable: horizontal min pass then vertical min pass.
    let mut tmp = ImageF::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut m = f64::INFINITY;
            for dx in -(r as isize)..=(r as isize) {
                m = m.min(src.sample(x as isize + dx, y as isize, border));
            }
            tmp.set(x, y, m);
        }
    }
    let mut out = ImageF::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut m = f64::INFINITY;
            for dy in -(r as isize)..=(r as isize) {
                m = m.min(tmp.sample(x as isize, y as isize + dy, border));
            }
            out.set(x, y, m);
        }
    }
    out
}

fn per_pixel_min(rgb: &[ImageF; 3]) -> ImageF {
    ImageF::from_fn(rgb[0].width(), rgb[0].height(), |x, y| {
        rgb[0].get(x, y).min(rgb[1].get(x, y)).min(rgb[2].get(x, y))
    })
}

/// Recover scene radiance from a hazy RGB image in `[0, 1]`.
pub fn dehaze(hazy: &[ImageF; 3], params: &DehazeParams) -> Result<DehazeOutput> {
    params.validate()?;
    hazy[0].expect_same_size(&hazy[1])?;
    hazy[0].expect_same_size(&hazy[2])?;
    for plane in hazy {
        plane.ensure_finite()?;
    }

    // Dark channel of the hazy image, used to locate the most haze-opaque
    // pixels for the airlight estimate.
    let dark = min_filter(&per_pixel_min(hazy), params.patch_radius);
    let n = dark.len();
    let take = ((n as f64 * params.airlight_quantile).ceil() as usize).clamp(1, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| dark.as_slice()[b].total_cmp(&dark.as_slice()[a]));
    let mut airlight = [0.0f64; 3];
    for &idx in &order[..take] {
        for (a, plane) in airlight.iter_mut().zip(hazy) {
            *a += plane.as_slice()[idx];
        }
    }
    for a in &mut airlight {
        *a /= take as f64;
    }
    if airlight.iter().any(|&a| a <= 0.0) {
        return Err(Error::param(
            "degenerate atmospheric light estimate (zero channel)",
        ));
    }

    // Raw transmission from the dark channel of the airlight-normalized
    // image.
    let normalized = [0, 1, 2].map(|i| hazy[i].scale(1.0 / airlight[i]));
    let dark_norm = min_filter(&per_pixel_min(&normalized), params.patch_radius);
    let transmission_raw = dark_norm.map(|d| 1.0 - params.omega * d);

    // Guided refinement against the hazy luminance.
    let guide = luminance(hazy);
    let transmission_refined = params.filter.run(&transmission_raw, &guide)?;

    // Invert the scattering model per channel.
    let t0 = params.t0;
    let recovered = [0, 1, 2].map(|i| {
        ImageF::from_fn(hazy[i].width(), hazy[i].height(), |x, y| {
            let t = transmission_refined.get(x, y).max(t0);
            (hazy[i].get(x, y) - airlight[i]) / t + airlight[i]
        })
    });

    Ok(DehazeOutput {
        recovered,
        transmission_raw,
        transmission_refined,
        airlight,
    })
}

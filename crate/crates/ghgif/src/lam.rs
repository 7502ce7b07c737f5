//! The local-affine filter family: GIF, WGIF, GGIF, SKWGIF, RDWGIF.
//!
//! One engine serves all five variants. The model fits, per window, an
//! affine map `a * G + b` of the guidance image to the input; variants
//! differ only in how the ridge term on `a` is weighted (constant, `w1`,
//! `w2` with the sigmoid target, or `w3` with mollifier-weighted moments)
//! and in how the per-window coefficients are averaged into per-pixel ones
//! (box mean, steering kernels, or mollifier).

use crate::error::{Error, Result};
use crate::image::{box_mean_unchecked, BorderPolicy, ImageF};
use crate::weights::{
    chi_field, eaw_w1, eaw_w3, gamma_map, mollifier_kernels, steering_kernels, MollifierKernel,
};

/// Which member of the local-affine family to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LamVariant {
    /// Constant ridge weight; the baseline filter.
    Gif,
    /// Single-scale edge-aware ridge weight `w1`.
    Wgif,
    /// Multiscale weight `w2` plus the sigmoid shift target for `a`.
    Ggif,
    /// Baseline coefficients, steering-kernel weighted averaging.
    Skwgif,
    /// Robust weight `w3`, mollifier-weighted moments and averaging.
    Rdwgif,
}

impl LamVariant {
    pub fn name(self) -> &'static str {
        match self {
            LamVariant::Gif => "gif",
            LamVariant::Wgif => "wgif",
            LamVariant::Ggif => "ggif",
            LamVariant::Skwgif => "skwgif",
            LamVariant::Rdwgif => "rdwgif",
        }
    }
}

/// Parameters for the local-affine family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LamParams {
    pub variant: LamVariant,
    /// Window radius; the regression window is `(2r+1) x (2r+1)`.
    pub radius: usize,
    /// Ridge regularization on `a`. Larger values smooth more.
    pub epsilon: f64,
    /// Small positive shift protecting the edge-aware weights (w1, w2).
    pub tau: f64,
    /// Integer MAD multiple that cuts off the robust weight w3.
    pub mad_scale: u32,
    /// Smoothing scale of the steering kernels (SKWGIF averaging).
    pub steering_h: f64,
    pub border: BorderPolicy,
}

impl LamParams {
    /// Defaults: `tau = 1e-4` (for `[0,1]` images), `mad_scale = 3`,
    /// `steering_h = max(1, r/2)`, replicate border.
    pub fn new(variant: LamVariant, radius: usize, epsilon: f64) -> Self {
        LamParams {
            variant,
            radius,
            epsilon,
            tau: 1e-4,
            mad_scale: 3,
            steering_h: (radius as f64 / 2.0).max(1.0),
            border: BorderPolicy::Replicate,
        }
    }

    pub fn gif(radius: usize, epsilon: f64) -> Self {
        Self::new(LamVariant::Gif, radius, epsilon)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 {
            return Err(Error::param("radius must be >= 1"));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::param(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        if !(self.tau > 0.0) {
            return Err(Error::param(format!("tau must be > 0, got {}", self.tau)));
        }
        if self.mad_scale < 1 {
            return Err(Error::param("mad_scale must be >= 1"));
        }
        if !(self.steering_h > 0.0) {
            return Err(Error::param("steering_h must be > 0"));
        }
        Ok(())
    }
}

/// The pre-averaging affine coefficient fields, indexed by window center.
#[derive(Debug, Clone)]
pub struct CoeffFields {
    pub a: ImageF,
    pub b: ImageF,
}

/// Window moments under either the box mean or the mollifier kernel.
struct Moments {
    mean_g: ImageF,
    mean_i: ImageF,
    /// Covariance of (G, I), clamped at zero only for the variance.
    cov: ImageF,
    var_g: ImageF,
}

fn moments_box(input: &ImageF, guide: &ImageF, r: usize, border: BorderPolicy) -> Moments {
    let mean_g = box_mean_unchecked(guide, r, border);
    let mean_i = box_mean_unchecked(input, r, border);
    let mean_gi = box_mean_unchecked(&guide.mul(input), r, border);
    let mean_gg = box_mean_unchecked(&guide.mul(guide), r, border);
    let cov = mean_gi.sub(&mean_g.mul(&mean_i));
    let var_g = mean_gg.zip_map(&mean_g, |gg, g| (gg - g * g).max(0.0));
    Moments {
        mean_g,
        mean_i,
        cov,
        var_g,
    }
}

fn moments_mollifier(
    input: &ImageF,
    guide: &ImageF,
    kernel: &MollifierKernel,
    border: BorderPolicy,
) -> Moments {
    let mean_g = kernel.average(guide, border);
    let mean_i = kernel.average(input, border);
    let mean_gi = kernel.average(&guide.mul(input), border);
    let mean_gg = kernel.average(&guide.mul(guide), border);
    let cov = mean_gi.sub(&mean_g.mul(&mean_i));
    let var_g = mean_gg.zip_map(&mean_g, |gg, g| (gg - g * g).max(0.0));
    Moments {
        mean_g,
        mean_i,
        cov,
        var_g,
    }
}

fn validate_pair(input: &ImageF, guide: &ImageF, params: &LamParams) -> Result<()> {
    params.validate()?;
    input.expect_same_size(guide)?;
    input.ensure_finite()?;
    guide.ensure_finite()?;
    Ok(())
}

/// Closed-form per-window coefficients for the requested variant.
pub fn lam_coeffs(input: &ImageF, guide: &ImageF, params: &LamParams) -> Result<CoeffFields> {
    validate_pair(input, guide, params)?;
    let r = params.radius;
    let eps = params.epsilon;
    let border = params.border;

    let (moments, a) = match params.variant {
        LamVariant::Gif | LamVariant::Skwgif => {
            let m = moments_box(input, guide, r, border);
            let a = m.cov.zip_map(&m.var_g, |cov, var| cov / (var + eps));
            (m, a)
        }
        LamVariant::Wgif => {
            let w1 = eaw_w1(guide, params.tau)?.values;
            let m = moments_box(input, guide, r, border);
            let a = ImageF::from_fn(input.width(), input.height(), |x, y| {
                m.cov.get(x, y) / (m.var_g.get(x, y) + eps * w1.get(x, y))
            });
            (m, a)
        }
        LamVariant::Ggif => {
            let w2 = crate::weights::eaw_w2(guide, r, params.tau)?.values;
            let gamma = gamma_map(guide, r, params.tau)?.values;
            let m = moments_box(input, guide, r, border);
            let a = ImageF::from_fn(input.width(), input.height(), |x, y| {
                let ew = eps * w2.get(x, y);
                (m.cov.get(x, y) + ew * gamma.get(x, y)) / (m.var_g.get(x, y) + ew)
            });
            (m, a)
        }
        LamVariant::Rdwgif => {
            let w3 = eaw_w3(guide, params.mad_scale)?.values;
            let kernel = mollifier_kernels(r)?;
            let m = moments_mollifier(input, guide, &kernel, border);
            let a = ImageF::from_fn(input.width(), input.height(), |x, y| {
                m.cov.get(x, y) / (m.var_g.get(x, y) + eps * w3.get(x, y))
            });
            (m, a)
        }
    };

    let b = offset_field(&moments, &a);
    Ok(CoeffFields { a, b })
}

fn offset_field(m: &Moments, a: &ImageF) -> ImageF {
    m.mean_i.sub(&a.mul(&m.mean_g))
}

/// Full filter: coefficients, averaging, and the affine combination with
/// the guidance image.
pub fn lam_filter(input: &ImageF, guide: &ImageF, params: &LamParams) -> Result<ImageF> {
    let coeffs = lam_coeffs(input, guide, params)?;
    let (a_bar, b_bar) = match params.variant {
        LamVariant::Gif | LamVariant::Wgif | LamVariant::Ggif => (
            box_mean_unchecked(&coeffs.a, params.radius, params.border),
            box_mean_unchecked(&coeffs.b, params.radius, params.border),
        ),
        LamVariant::Skwgif => {
            let kernels = steering_kernels(guide, params.radius, params.steering_h)?;
            (
                kernels.average(&coeffs.a, params.border),
                kernels.average(&coeffs.b, params.border),
            )
        }
        LamVariant::Rdwgif => {
            let kernel = mollifier_kernels(params.radius)?;
            (
                kernel.average(&coeffs.a, params.border),
                kernel.average(&coeffs.b, params.border),
            )
        }
    };
    Ok(a_bar.mul(guide).add(&b_bar))
}

/// Multiscale product field used by GGIF's weighting, re-exported for
/// diagnostics.
pub fn ggif_chi(guide: &ImageF, r: usize) -> ImageF {
    chi_field(guide, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng_image(w: usize, h: usize, seed: u64) -> ImageF {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).max(1);
        ImageF::from_fn(w, h, |_, _| {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
        })
    }

    #[test]
    fn flat_patch_limit_self_guided() {
        let img = ImageF::splat(12, 12, 0.37);
        let coeffs = lam_coeffs(&img, &img, &LamParams::gif(2, 0.04)).unwrap();
        assert!(coeffs.a.map(f64::abs).max_value() < 1e-12);
        assert!(coeffs.b.map(|v| (v - 0.37).abs()).max_value() < 1e-12);
    }

    #[test]
    fn variance_equal_epsilon_halves_a() {
        // Build an image whose local variance at the center equals epsilon.
        // A two-valued checkerboard of amplitude d has window variance d^2.
        let d = 0.2;
        let eps = d * d;
        let img = ImageF::from_fn(13, 13, |x, y| 0.5 + if (x + y) % 2 == 0 { d } else { -d });
        let coeffs = lam_coeffs(&img, &img, &LamParams::gif(2, eps)).unwrap();
        // Interior windows hold equally many of both values when the window
        // side is odd... it is 5x5 = 25 cells: 13 of one, 12 of the other,
        // so variance is not exactly d^2; accept 2% slack.
        let a_center = coeffs.a.get(6, 6);
        assert!((a_center - 0.5).abs() < 0.02, "a={a_center}");
    }

    #[test]
    fn constant_input_all_variants_fixed_point() {
        let img = ImageF::splat(16, 16, 0.62);
        for variant in [
            LamVariant::Gif,
            LamVariant::Wgif,
            LamVariant::Ggif,
            LamVariant::Skwgif,
            LamVariant::Rdwgif,
        ] {
            let params = LamParams::new(variant, 2, 0.04);
            let out = lam_filter(&img, &img, &params).unwrap();
            assert!(
                out.map(|v| (v - 0.62).abs()).max_value() < 1e-9,
                "variant {variant:?}"
            );
        }
    }

    #[test]
    fn huge_epsilon_collapses_to_double_box_mean() {
        let img = rng_image(16, 16, 4);
        let params = LamParams::gif(2, 1e6);
        let out = lam_filter(&img, &img, &params).unwrap();
        let twice = box_mean_unchecked(
            &box_mean_unchecked(&img, 2, BorderPolicy::Replicate),
            2,
            BorderPolicy::Replicate,
        );
        assert!(out.max_abs_diff(&twice) < 1e-3);
    }

    #[test]
    fn self_guided_a_in_unit_interval() {
        let img = rng_image(16, 16, 8);
        let coeffs = lam_coeffs(&img, &img, &LamParams::gif(3, 0.01)).unwrap();
        assert!(coeffs.a.min_value() >= 0.0);
        assert!(coeffs.a.max_value() <= 1.0);
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let a = ImageF::zeros(8, 8);
        let b = ImageF::zeros(9, 8);
        assert!(lam_filter(&a, &b, &LamParams::gif(2, 0.04)).is_err());
    }

    #[test]
    fn rejects_non_positive_epsilon() {
        let img = ImageF::zeros(8, 8);
        assert!(lam_filter(&img, &img, &LamParams::gif(2, 0.0)).is_err());
        assert!(lam_filter(&img, &img, &LamParams::gif(2, -0.1)).is_err());
    }

    #[test]
    fn grayscale_shift_equivariance() {
        let img = rng_image(14, 14, 21);
        let shifted = img.map(|v| v + 0.35);
        let params = LamParams::gif(2, 0.04);
        let base = lam_filter(&img, &img, &params).unwrap();
        let moved = lam_filter(&shifted, &shifted, &params).unwrap();
        assert!(moved.max_abs_diff(&base.map(|v| v + 0.35)) < 1e-6);
    }

    #[test]
    fn edge_preservation_ordering_at_step() {
        // Max gradient of the filtered step: GGIF >= WGIF >= GIF.
        let img = ImageF::from_fn(32, 16, |x, _| if x < 16 { 0.0 } else { 1.0 });
        let eps = 0.16;
        let grad = |out: &ImageF| {
            let mut g: f64 = 0.0;
            for y in 0..out.height() {
                for x in 1..out.width() {
                    g = g.max((out.get(x, y) - out.get(x - 1, y)).abs());
                }
            }
            g
        };
        let gif = grad(&lam_filter(&img, &img, &LamParams::gif(4, eps)).unwrap());
        let wgif =
            grad(&lam_filter(&img, &img, &LamParams::new(LamVariant::Wgif, 4, eps)).unwrap());
        let ggif =
            grad(&lam_filter(&img, &img, &LamParams::new(LamVariant::Ggif, 4, eps)).unwrap());
        assert!(
            ggif >= wgif && wgif >= gif,
            "ordering violated: ggif={ggif} wgif={wgif} gif={gif}"
        );
    }
}

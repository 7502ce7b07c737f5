//! Detail enhancement: split the image into a filtered base layer and a
//! residual detail layer, then add the detail back amplified.

use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::image::ImageF;

#[derive(Debug, Clone, PartialEq)]
pub struct EnhanceParams {
    /// Detail amplification factor; 1 reproduces the input exactly.
    pub k: f64,
    /// Filter producing the base layer (run self-guided).
    pub filter: Filter,
}

impl EnhanceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(Error::param(format!("k must be > 0, got {}", self.k)));
        }
        self.filter.validate()
    }
}

/// `out = base + k * (input - base)` with the base from the self-guided
/// filter. The result is returned raw (not clamped); clamp on export.
pub fn detail_enhance(input: &ImageF, params: &EnhanceParams) -> Result<ImageF> {
    params.validate()?;
    let base = params.filter.run_self(input)?;
    Ok(ImageF::from_fn(input.width(), input.height(), |x, y| {
        let b = base.get(x, y);
        b + params.k * (input.get(x, y) - b)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: f64) -> EnhanceParams {
        EnhanceParams {
            k,
            filter: Filter::from_name("gif", 4, 0.01).unwrap(),
        }
    }

    #[test]
    fn k_one_is_identity() {
        let img = ImageF::from_fn(24, 24, |x, y| ((x ^ y) % 7) as f64 / 7.0);
        let out = detail_enhance(&img, &params(1.0)).unwrap();
        assert!(out.max_abs_diff(&img) < 1e-12);
    }

    #[test]
    fn constant_image_unchanged_for_any_k() {
        let img = ImageF::splat(20, 20, 0.44);
        let out = detail_enhance(&img, &params(5.0)).unwrap();
        assert!(out.max_abs_diff(&img) < 1e-9);
    }

    #[test]
    fn enhancement_algebra_is_exact() {
        let img = ImageF::from_fn(24, 24, |x, y| ((3 * x + 5 * y) % 13) as f64 / 13.0);
        let p = params(5.0);
        let base = p.filter.run_self(&img).unwrap();
        let out = detail_enhance(&img, &p).unwrap();
        // out - base == k * (input - base), elementwise.
        let lhs = out.sub(&base);
        let rhs = img.sub(&base).scale(5.0);
        assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }

    #[test]
    fn rejects_non_positive_k() {
        let img = ImageF::zeros(8, 8);
        assert!(detail_enhance(&img, &params(0.0)).is_err());
        assert!(detail_enhance(&img, &params(-2.0)).is_err());
    }
}

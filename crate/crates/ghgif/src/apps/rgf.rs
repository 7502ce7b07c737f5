//! Rolling-guidance texture removal: structures below a chosen scale are
//! erased by an initial Gaussian, then each pass filters the *original*
//! image using the previous pass's output as guidance, progressively
//! restoring large-scale edges while small-scale texture stays gone.

use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::image::{gaussian_blur, GaussianSpec, ImageF};

#[derive(Debug, Clone, PartialEq)]
pub struct RgfParams {
    /// Number of guided iterations after the initial Gaussian pass.
    pub iterations: usize,
    /// Scale of the structure-removal Gaussian that seeds the guidance.
    pub sigma_init: f64,
    /// Guided filter run each iteration (input = original image,
    /// guidance = previous iterate).
    pub filter: Filter,
}

impl RgfParams {
    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::param("iterations must be >= 1"));
        }
        GaussianSpec::new(self.sigma_init).validate()?;
        self.filter.validate()
    }
}

/// Run the rolling loop and return the final iterate. The initial Gaussian
/// pass is iteration zero and is not counted in `iterations`.
pub fn rgf_texture_removal(input: &ImageF, params: &RgfParams) -> Result<ImageF> {
    params.validate()?;
    input.ensure_finite()?;
    let border = match &params.filter {
        Filter::Lam(p) => p.border,
        Filter::Pmgf(p) => p.border,
    };
    let mut guidance = gaussian_blur(input, &GaussianSpec::new(params.sigma_init), border)?;
    for _ in 0..params.iterations {
        guidance = params.filter.run(input, &guidance)?;
    }
    Ok(guidance)
}

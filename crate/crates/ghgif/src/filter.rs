//! A single handle over both filter families, so pipelines and the CLI can
//! take "some guided filter" without caring which engine backs it.

use crate::error::{Error, Result};
use crate::image::ImageF;
use crate::lam::{lam_filter, LamParams, LamVariant};
use crate::pmgf::{pmgf_filter, PmgfParams, PmgfVariant};

/// Either family, fully parameterized.
#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    Lam(LamParams),
    Pmgf(PmgfParams),
}

impl Filter {
    /// Parse a variant name. Affine-family names take an epsilon; the
    /// `gh-` names take a lambda.
    pub fn from_name(name: &str, radius: usize, reg: f64) -> Result<Filter> {
        let filter = match name {
            "gif" => Filter::Lam(LamParams::new(LamVariant::Gif, radius, reg)),
            "wgif" => Filter::Lam(LamParams::new(LamVariant::Wgif, radius, reg)),
            "ggif" => Filter::Lam(LamParams::new(LamVariant::Ggif, radius, reg)),
            "skwgif" => Filter::Lam(LamParams::new(LamVariant::Skwgif, radius, reg)),
            "rdwgif" => Filter::Lam(LamParams::new(LamVariant::Rdwgif, radius, reg)),
            "gh-gif" => Filter::Pmgf(PmgfParams::new(PmgfVariant::GhGif, radius, reg)),
            "gh-wgif" => Filter::Pmgf(PmgfParams::new(PmgfVariant::GhWgif, radius, reg)),
            "gh-ggif" => Filter::Pmgf(PmgfParams::new(PmgfVariant::GhGgif, radius, reg)),
            "gh-skwgif" => Filter::Pmgf(PmgfParams::new(PmgfVariant::GhSkwgif, radius, reg)),
            "gh-rdwgif" => Filter::Pmgf(PmgfParams::new(PmgfVariant::GhRdwgif, radius, reg)),
            other => {
                return Err(Error::param(format!(
                    "unknown filter variant '{other}' (expected one of: gif, wgif, ggif, \
                     skwgif, rdwgif, gh-gif, gh-wgif, gh-ggif, gh-skwgif, gh-rdwgif)"
                )))
            }
        };
        Ok(filter)
    }

    /// All ten variant names, affine family first, each followed by its
    /// highpass counterpart in benchmark order.
    pub fn all_names() -> [&'static str; 10] {
        [
            "gif", "wgif", "ggif", "skwgif", "rdwgif", "gh-gif", "gh-wgif", "gh-ggif",
            "gh-skwgif", "gh-rdwgif",
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Filter::Lam(p) => p.variant.name(),
            Filter::Pmgf(p) => p.variant.name(),
        }
    }

    pub fn is_highpass_family(&self) -> bool {
        matches!(self, Filter::Pmgf(_))
    }

    pub fn radius(&self) -> usize {
        match self {
            Filter::Lam(p) => p.radius,
            Filter::Pmgf(p) => p.radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Filter::Lam(p) => p.validate(),
            Filter::Pmgf(p) => p.validate(),
        }
    }

    /// Run the filter on `input` with `guide` as guidance.
    pub fn run(&self, input: &ImageF, guide: &ImageF) -> Result<ImageF> {
        match self {
            Filter::Lam(p) => lam_filter(input, guide, p),
            Filter::Pmgf(p) => pmgf_filter(input, guide, p),
        }
    }

    /// Self-guided run (`guide = input`), the pure smoothing case.
    pub fn run_self(&self, input: &ImageF) -> Result<ImageF> {
        self.run(input, input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_names() {
        for name in Filter::all_names() {
            let f = Filter::from_name(name, 4, 0.04).unwrap();
            assert_eq!(f.name(), name);
        }
        assert!(Filter::from_name("nope", 4, 0.04).is_err());
    }

    #[test]
    fn family_split() {
        assert!(!Filter::from_name("rdwgif", 2, 0.1).unwrap().is_highpass_family());
        assert!(Filter::from_name("gh-rdwgif", 2, 0.1).unwrap().is_highpass_family());
    }

    #[test]
    fn self_guided_equals_explicit_guide() {
        let img = ImageF::from_fn(16, 16, |x, y| ((x * 7 + y * 13) % 11) as f64 / 11.0);
        let f = Filter::from_name("gh-gif", 2, 0.004).unwrap();
        let a = f.run_self(&img).unwrap();
        let b = f.run(&img, &img).unwrap();
        assert_eq!(a, b);
    }
}

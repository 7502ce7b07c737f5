//! Guided image filtering, two ways.
//!
//! This crate implements two families of edge-preserving guided filters
//! behind one interface:
//!
//! * the **local-affine family** ([`lam`]): GIF, WGIF, GGIF, SKWGIF and
//!   RDWGIF, which fit a per-window affine map of the guidance image to
//!   the input, and
//! * the **Gaussian-highpass family** ([`pmgf`]): GH-GIF, GH-WGIF,
//!   GH-GGIF, GH-SKWGIF and GH-RDWGIF, which split both images into a
//!   Gaussian base and a highpass residual and fit a single per-window
//!   gain that transfers the guidance residual onto the smoothed input.
//!
//! On top of the filters it ships the standard applications that exercise
//! them — detail enhancement, HDR tone mapping, single-image dehazing and
//! rolling-guidance texture removal ([`apps`]) — plus PSNR/SSIM metrics
//! ([`metrics`]), image I/O ([`io`]) and deterministic synthetic test
//! scenes ([`synth`]).
//!
//! ```
//! use ghgif::{Filter, ImageF};
//!
//! let noisy = ghgif::synth::plateau_texture(64, 64, 7);
//! let smoothed = Filter::from_name("gh-gif", 4, 0.004)?.run_self(&noisy)?;
//! assert_eq!(smoothed.width(), 64);
//! # Ok::<(), ghgif::Error>(())
//! ```
//!
//! The `book/` directory of the repository walks through the concepts; its
//! code snippets are compiled as doctests below so the guide cannot drift
//! from the library.

// Parameter guards are written `!(x > 0.0)` on purpose: the negated form
// also rejects NaN, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod apps;
pub mod error;
pub mod filter;
pub mod image;
pub mod io;
pub mod lam;
pub mod metrics;
pub mod pmgf;
pub mod synth;
pub mod weights;

pub use error::{Error, Result};
pub use filter::Filter;
pub use image::{box_mean, gaussian_blur, highpass, BorderPolicy, GaussianSpec, ImageF};
pub use lam::{lam_coeffs, lam_filter, CoeffFields, LamParams, LamVariant};
pub use metrics::{metric_report, psnr, ssim, MetricReport};
pub use pmgf::{
    pmgf_alpha, pmgf_filter, structure_transfer_decomposition, AlphaField, PmgfParams,
    PmgfVariant,
};
pub use weights::{
    eaw_w1, eaw_w2, eaw_w3, gamma_map, mnd, mollifier_kernels, steering_kernels, WeightMap,
};

// Compile the book's code snippets as doctests.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(Primitives, "../../../book/src/primitives.md");
    chapter!(AffineFamily, "../../../book/src/affine-family.md");
    chapter!(EdgeAwareWeights, "../../../book/src/edge-aware-weights.md");
    chapter!(HighpassFamily, "../../../book/src/highpass-family.md");
    chapter!(Applications, "../../../book/src/applications.md");
    chapter!(Metrics, "../../../book/src/metrics.md");
    chapter!(Cli, "../../../book/src/cli.md");
    chapter!(Benchmarks, "../../../book/src/benchmarks.md");
}

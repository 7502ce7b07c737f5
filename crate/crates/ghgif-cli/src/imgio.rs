//! Filter construction from CLI options and helpers for running filters on
//! single- or three-plane images.

use std::path::Path;

use ghgif::image::BorderPolicy;
use ghgif::io::LoadedImage;
use ghgif::pmgf::LAMBDA_PRACTICAL_FLOOR;
use ghgif::{Filter, ImageF};

use crate::error::{CliError, CliResult};
use crate::FilterOpts;

/// Effective parameters resolved from the CLI options, kept for sidecars
/// and report rows.
#[derive(Debug, Clone)]
pub struct ResolvedFilter {
    pub filter: Filter,
    pub variant: String,
    pub r: usize,
    pub eps: Option<f64>,
    pub lambda: Option<f64>,
    pub sigma: Option<f64>,
    pub border: String,
}

/// Build a filter from the shared CLI options. `default_r`/`default_eps`
/// are the command's published defaults; the highpass family derives
/// lambda = eps/10 unless given explicitly.
pub fn resolve_filter(
    opts: &FilterOpts,
    default_r: usize,
    default_eps: f64,
) -> CliResult<ResolvedFilter> {
    let r = opts.r.unwrap_or(default_r);
    let eps = opts.eps.unwrap_or(default_eps);
    let border: BorderPolicy = opts
        .border
        .parse()
        .map_err(|e: ghgif::Error| CliError::param(e.to_string()))?;
    let is_gh = opts.variant.starts_with("gh-");

    let reg = if is_gh {
        opts.lambda.unwrap_or(eps * 0.1)
    } else {
        if opts.lambda.is_some() {
            return Err(CliError::param(
                "--lambda applies to the gh- variants; use --eps here",
            ));
        }
        eps
    };

    let mut filter = Filter::from_name(&opts.variant, r, reg)?;
    let mut sigma_out = None;
    match &mut filter {
        Filter::Pmgf(p) => {
            if let Some(s) = opts.sigma {
                p.sigma = s;
            }
            p.border = border;
            sigma_out = Some(p.sigma);
            if p.lambda < LAMBDA_PRACTICAL_FLOOR {
                eprintln!(
                    "warning: lambda = {} is below the practical floor {LAMBDA_PRACTICAL_FLOOR}; \
                     expect spurious detail in flat regions",
                    p.lambda
                );
            }
        }
        Filter::Lam(p) => {
            if opts.sigma.is_some() {
                return Err(CliError::param(
                    "--sigma applies to the gh- variants only",
                ));
            }
            p.border = border;
        }
    }
    filter.validate()?;

    // For gh- runs driven by an explicit --lambda, epsilon played no role
    // and is omitted from the effective-parameter record.
    let eps_record = if is_gh && opts.lambda.is_some() && opts.eps.is_none() {
        None
    } else {
        Some(eps)
    };
    Ok(ResolvedFilter {
        variant: opts.variant.clone(),
        r,
        eps: eps_record,
        lambda: if is_gh { Some(reg) } else { None },
        sigma: sigma_out,
        border: opts.border.clone(),
        filter,
    })
}

pub fn load(path: &Path) -> CliResult<LoadedImage> {
    Ok(ghgif::io::read_image(path)?)
}

pub fn save(path: &Path, image: &LoadedImage) -> CliResult<()> {
    Ok(ghgif::io::write_image(path, image)?)
}

/// Run a filter over a loaded image, per channel for RGB. An RGB guide
/// guides channel-by-channel; a gray guide steers every channel; a gray
/// input with an RGB guide uses the guide's luminance.
pub fn run_on_image(
    filter: &Filter,
    input: &LoadedImage,
    guide: Option<&LoadedImage>,
) -> CliResult<LoadedImage> {
    match (input, guide) {
        (LoadedImage::Gray(img), None) => Ok(LoadedImage::Gray(filter.run_self(img)?)),
        (LoadedImage::Gray(img), Some(LoadedImage::Gray(g))) => {
            Ok(LoadedImage::Gray(filter.run(img, g)?))
        }
        (LoadedImage::Gray(img), Some(rgb @ LoadedImage::Rgb(_))) => {
            Ok(LoadedImage::Gray(filter.run(img, &rgb.luminance())?))
        }
        (LoadedImage::Rgb(planes), None) => {
            let out = run_rgb(filter, planes, None)?;
            Ok(LoadedImage::Rgb(out))
        }
        (LoadedImage::Rgb(planes), Some(LoadedImage::Gray(g))) => {
            let guides = [g, g, g];
            let out = run_rgb(filter, planes, Some(guides))?;
            Ok(LoadedImage::Rgb(out))
        }
        (LoadedImage::Rgb(planes), Some(LoadedImage::Rgb(g))) => {
            let guides = [&g[0], &g[1], &g[2]];
            let out = run_rgb(filter, planes, Some(guides))?;
            Ok(LoadedImage::Rgb(out))
        }
    }
}

fn run_rgb(
    filter: &Filter,
    planes: &[ImageF; 3],
    guides: Option<[&ImageF; 3]>,
) -> CliResult<[ImageF; 3]> {
    let mut out = Vec::with_capacity(3);
    for (i, plane) in planes.iter().enumerate() {
        let filtered = match &guides {
            Some(g) => filter.run(plane, g[i])?,
            None => filter.run_self(plane)?,
        };
        out.push(filtered);
    }
    let mut it = out.into_iter();
    Ok([
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    ])
}

/// File stem for report rows.
pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

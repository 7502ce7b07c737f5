//! The benchmark harness: `bench-smooth` and `bench-denoise`.
//!
//! Both commands sweep the ten filter variants over a corpus directory and
//! emit one JSON-lines record per (filter, image, cell), plus per-cell
//! `average` rows. Grid cells may run in parallel (`GHGIF_THREADS` caps
//! the pool); the report is sorted canonically afterwards so execution
//! order never leaks into the output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use ghgif::image::{gaussian_blur, GaussianSpec};
use ghgif::io::LoadedImage;
use ghgif::metrics::{psnr, ssim};
use ghgif::{BorderPolicy, Filter, ImageF};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::imgio::stem;
use crate::report::{family_of, render_markdown, sort_canonical, write_jsonl, BenchmarkRecord};
use crate::{BenchDenoiseArgs, BenchSmoothArgs};

pub const DEFAULT_NOISE_SIGMA: f64 = 25.0 / 255.0;

/// Load every supported image in the corpus directory as grayscale
/// (luminance for color files), sorted by name.
fn load_corpus(dir: &Path) -> CliResult<Vec<(String, ImageF)>> {
    if !dir.is_dir() {
        return Err(CliError::io(format!(
            "corpus directory {} does not exist",
            dir.display()
        )));
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            matches!(
                p.extension().and_then(|e| e.to_str()),
                Some("png" | "pgm" | "ppm")
            )
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::param(format!(
            "corpus directory {} contains no png/pgm/ppm images",
            dir.display()
        )));
    }
    let mut corpus = Vec::with_capacity(paths.len());
    for path in paths {
        let image = ghgif::io::read_image(&path)?;
        let gray = match image {
            LoadedImage::Gray(g) => g,
            rgb @ LoadedImage::Rgb(_) => rgb.luminance(),
        };
        corpus.push((stem(&path), gray));
    }
    Ok(corpus)
}

/// Build the worker pool, honoring the GHGIF_THREADS cap.
fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("GHGIF_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::param(format!("GHGIF_THREADS must be a number, got '{v}'")))?;
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder
        .build()
        .map_err(|e| CliError::param(format!("thread pool: {e}")))
}

/// A grid cell's filter with the parameters as they appear in its report
/// row. Highpass variants always mirror lambda = eps/10.
struct CellFilter {
    filter: Filter,
    eps: Option<f64>,
    lambda: Option<f64>,
    sigma: Option<f64>,
}

fn build_filter(name: &str, r: usize, eps: f64, sigma_scale: f64) -> CliResult<CellFilter> {
    if name.starts_with("gh-") {
        let lambda = 0.1 * eps;
        let mut filter = Filter::from_name(name, r, lambda)?;
        if let Filter::Pmgf(p) = &mut filter {
            p.sigma = (r as f64 * sigma_scale).max(0.5);
        }
        let sigma = match &filter {
            Filter::Pmgf(p) => Some(p.sigma),
            _ => None,
        };
        Ok(CellFilter {
            filter,
            eps: None,
            lambda: Some(lambda),
            sigma,
        })
    } else {
        Ok(CellFilter {
            filter: Filter::from_name(name, r, eps)?,
            eps: Some(eps),
            lambda: None,
            sigma: None,
        })
    }
}

fn aggregate_averages(records: &[BenchmarkRecord]) -> Vec<BenchmarkRecord> {
    // Group by everything except the image, averaging psnr/ssim.
    let mut averages: Vec<BenchmarkRecord> = Vec::new();
    for rec in records {
        let found = averages.iter_mut().find(|a| {
            a.filter == rec.filter
                && a.r == rec.r
                && a.eps == rec.eps
                && a.lambda == rec.lambda
                && a.sigma == rec.sigma
                && a.guidance == rec.guidance
        });
        match found {
            Some(a) => {
                a.psnr_db += rec.psnr_db;
                a.ssim += rec.ssim;
                a.seed = rec.seed;
                // wall_ms averages only when present everywhere.
                a.wall_ms = match (a.wall_ms, rec.wall_ms) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                };
            }
            None => {
                let mut a = rec.clone();
                a.image = "average".into();
                averages.push(a);
            }
        }
    }
    let counts = |avg: &BenchmarkRecord| {
        records
            .iter()
            .filter(|r| {
                r.filter == avg.filter
                    && r.r == avg.r
                    && r.eps == avg.eps
                    && r.lambda == avg.lambda
                    && r.sigma == avg.sigma
                    && r.guidance == avg.guidance
            })
            .count() as f64
    };
    for avg in &mut averages {
        let n = counts(avg);
        avg.psnr_db /= n;
        avg.ssim /= n;
        if let Some(w) = avg.wall_ms.as_mut() {
            *w /= n;
        }
    }
    averages
}

fn emit(
    mut records: Vec<BenchmarkRecord>,
    report: Option<&Path>,
    markdown: Option<&Path>,
) -> CliResult<()> {
    let averages = aggregate_averages(&records);
    records.extend(averages);
    sort_canonical(&mut records);

    if let Some(path) = report {
        write_jsonl(path, &records)?;
        println!("report: {} rows -> {}", records.len(), path.display());
    } else {
        for r in &records {
            println!(
                "{}",
                serde_json::to_string(r).map_err(|e| CliError::io(e.to_string()))?
            );
        }
    }
    if let Some(path) = markdown {
        let mut text = String::new();
        text.push_str(&render_markdown(&records, "psnr"));
        text.push('\n');
        text.push_str(&render_markdown(&records, "ssim"));
        std::fs::write(path, text)?;
        println!("markdown tables -> {}", path.display());
    }
    Ok(())
}

pub fn run_smooth(args: BenchSmoothArgs) -> CliResult<()> {
    if args.r_grid.is_empty() || args.eps_grid.is_empty() || args.sigma_scale.is_empty() {
        return Err(CliError::param("empty benchmark grid"));
    }
    let corpus = load_corpus(&args.corpus)?;
    let pool = thread_pool()?;

    // One task per (image, filter, cell). Sigma scales only multiply the
    // highpass-family cells; affine filters ignore them.
    let mut tasks = Vec::new();
    for (name, _) in &corpus {
        for filter_name in Filter::all_names() {
            let scales: &[f64] = if filter_name.starts_with("gh-") {
                &args.sigma_scale
            } else {
                &args.sigma_scale[..1]
            };
            for &r in &args.r_grid {
                for &eps in &args.eps_grid {
                    for &scale in scales {
                        tasks.push((name.clone(), filter_name, r, eps, scale));
                    }
                }
            }
        }
    }
    let timing = args.timing;
    let records: CliResult<Vec<BenchmarkRecord>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|(image_name, filter_name, r, eps, scale)| {
                let clean = &corpus.iter().find(|(n, _)| n == image_name).unwrap().1;
                let cell = build_filter(filter_name, *r, *eps, *scale)?;
                let start = Instant::now();
                let out = cell.filter.run_self(clean)?;
                let wall = start.elapsed().as_secs_f64() * 1e3;
                Ok(BenchmarkRecord {
                    filter: filter_name.to_string(),
                    family: family_of(filter_name).into(),
                    image: image_name.clone(),
                    r: *r,
                    eps: cell.eps,
                    lambda: cell.lambda,
                    sigma: cell.sigma,
                    guidance: None,
                    noise_sigma: None,
                    guide_sigma: None,
                    psnr_db: psnr(&out, clean, 1.0)?,
                    ssim: ssim(&out, clean)?,
                    wall_ms: timing.then_some(wall),
                    seed: None,
                })
            })
            .collect()
    });
    emit(records?, args.report.as_deref(), args.markdown.as_deref())
}

/// Seeded Gaussian noise field added to a clean image. The per-image seed
/// is derived deterministically, so corpus order and thread scheduling do
/// not change the noise.
pub fn noisy_version(clean: &ImageF, seed: u64, image_index: u64, sigma: f64) -> ImageF {
    let mut rng = ChaCha8Rng::seed_from_u64(
        seed ^ image_index.wrapping_mul(0x9E3779B97F4A7C15),
    );
    let normal = Normal::new(0.0, sigma).expect("valid sigma");
    clean.map(|v| v + normal.sample(&mut rng))
}

pub fn run_denoise(args: BenchDenoiseArgs) -> CliResult<()> {
    let corpus = load_corpus(&args.corpus)?;
    let noise_sigma = args.noise_sigma.unwrap_or(DEFAULT_NOISE_SIGMA);
    // Negated comparison rejects NaN as well.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(noise_sigma > 0.0) {
        return Err(CliError::param("noise sigma must be > 0"));
    }
    let pool = thread_pool()?;

    // Noisy inputs and case-2 guidance are prepared once per image.
    let mut prepared = Vec::with_capacity(corpus.len());
    for (idx, (name, clean)) in corpus.iter().enumerate() {
        let noisy = noisy_version(clean, args.seed, idx as u64, noise_sigma);
        let smoothed_guide = gaussian_blur(
            &noisy,
            &GaussianSpec::new(args.guide_sigma),
            BorderPolicy::Replicate,
        )?;
        prepared.push((name.clone(), clean.clone(), noisy, smoothed_guide));
    }

    let mut tasks = Vec::new();
    for (name, ..) in &prepared {
        for filter_name in Filter::all_names() {
            for case in ["clean", "smoothed"] {
                tasks.push((name.clone(), filter_name, case));
            }
        }
    }
    let (r, eps, seed, timing) = (args.r, args.eps, args.seed, args.timing);
    let guide_sigma = args.guide_sigma;
    let records: CliResult<Vec<BenchmarkRecord>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|(image_name, filter_name, case)| {
                let (_, clean, noisy, smoothed) = prepared
                    .iter()
                    .find(|(n, ..)| n == image_name)
                    .unwrap();
                let cell = build_filter(filter_name, r, eps, 0.5)?;
                let guide = if *case == "clean" { clean } else { smoothed };
                let start = Instant::now();
                let out = cell.filter.run(noisy, guide)?;
                let wall = start.elapsed().as_secs_f64() * 1e3;
                Ok(BenchmarkRecord {
                    filter: filter_name.to_string(),
                    family: family_of(filter_name).into(),
                    image: image_name.clone(),
                    r,
                    eps: cell.eps,
                    lambda: cell.lambda,
                    sigma: cell.sigma,
                    guidance: Some(case.to_string()),
                    noise_sigma: Some(noise_sigma),
                    guide_sigma: (*case == "smoothed").then_some(guide_sigma),
                    psnr_db: psnr(&out, clean, 1.0)?,
                    ssim: ssim(&out, clean)?,
                    wall_ms: timing.then_some(wall),
                    seed: Some(seed),
                })
            })
            .collect()
    });
    emit(records?, args.report.as_deref(), None)
}

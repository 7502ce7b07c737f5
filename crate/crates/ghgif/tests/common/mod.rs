//! Shared brute-force oracles and helpers for the integration and
//! acceptance suites. Everything here recomputes results with scalar
//! loops and direct linear solves, independent of the library fast paths.
#![allow(dead_code)] // each test binary uses its own subset

use ghgif::image::{BorderPolicy, GaussianSpec, ImageF};
use ghgif::lam::{LamParams, LamVariant};
use ghgif::pmgf::PmgfParams;
use ghgif::weights::{eaw_w1, eaw_w2, eaw_w3, gamma_map, mollifier_kernels, steering_kernels};

pub fn rng_image(w: usize, h: usize, seed: u64) -> ImageF {
    let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).max(1);
    ImageF::from_fn(w, h, |_, _| {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
    })
}

/// Weighted affine regression with ridge on `a` only, solved by Cramer's
/// rule on the 2x2 normal equations.
pub fn solve_window(samples: &[(f64, f64, f64)], ridge: f64, a_target: f64) -> (f64, f64) {
    let mut sw = 0.0;
    let mut sg = 0.0;
    let mut si = 0.0;
    let mut sgg = 0.0;
    let mut sgi = 0.0;
    for &(g, i, w) in samples {
        sw += w;
        sg += w * g;
        si += w * i;
        sgg += w * g * g;
        sgi += w * g * i;
    }
    let a11 = sgg + sw * ridge;
    let a12 = sg;
    let a22 = sw;
    let rhs1 = sgi + sw * ridge * a_target;
    let rhs2 = si;
    let det = a11 * a22 - a12 * a12;
    let a = (rhs1 * a22 - a12 * rhs2) / det;
    let b = (a11 * rhs2 - rhs1 * a12) / det;
    (a, b)
}

fn window_samples(
    input: &ImageF,
    guide: &ImageF,
    cx: usize,
    cy: usize,
    r: usize,
    weights: Option<&[f64]>,
    border: BorderPolicy,
) -> Vec<(f64, f64, f64)> {
    let side = 2 * r + 1;
    let mut out = Vec::with_capacity(side * side);
    for (j, dy) in (-(r as isize)..=(r as isize)).enumerate() {
        for (i, dx) in (-(r as isize)..=(r as isize)).enumerate() {
            let g = guide.sample(cx as isize + dx, cy as isize + dy, border);
            let v = input.sample(cx as isize + dx, cy as isize + dy, border);
            let w = weights.map_or(1.0, |ws| ws[j * side + i]);
            out.push((g, v, w));
        }
    }
    out
}

/// Direct regress-then-average for the affine family.
pub fn lam_oracle(input: &ImageF, guide: &ImageF, params: &LamParams) -> ImageF {
    let (w, h) = (input.width(), input.height());
    let r = params.radius;
    let border = params.border;
    let side = 2 * r + 1;

    let (ridge_w, a_target): (Option<ImageF>, Option<ImageF>) = match params.variant {
        LamVariant::Gif | LamVariant::Skwgif => (None, None),
        LamVariant::Wgif => (Some(eaw_w1(guide, params.tau).unwrap().values), None),
        LamVariant::Ggif => (
            Some(eaw_w2(guide, r, params.tau).unwrap().values),
            Some(gamma_map(guide, r, params.tau).unwrap().values),
        ),
        LamVariant::Rdwgif => (Some(eaw_w3(guide, params.mad_scale).unwrap().values), None),
    };
    let sample_weights: Option<Vec<f64>> = match params.variant {
        LamVariant::Rdwgif => Some(mollifier_kernels(r).unwrap().weights().to_vec()),
        _ => None,
    };

    let mut a_field = ImageF::zeros(w, h);
    let mut b_field = ImageF::zeros(w, h);
    for cy in 0..h {
        for cx in 0..w {
            let samples =
                window_samples(input, guide, cx, cy, r, sample_weights.as_deref(), border);
            let rw = ridge_w.as_ref().map_or(1.0, |f| f.get(cx, cy));
            let at = a_target.as_ref().map_or(0.0, |f| f.get(cx, cy));
            let (a, b) = solve_window(&samples, params.epsilon * rw, at);
            a_field.set(cx, cy, a);
            b_field.set(cx, cy, b);
        }
    }

    let averaged = |field: &ImageF| -> ImageF {
        match params.variant {
            LamVariant::Gif | LamVariant::Wgif | LamVariant::Ggif => {
                ImageF::from_fn(w, h, |x, y| {
                    let mut sum = 0.0;
                    for dy in -(r as isize)..=(r as isize) {
                        for dx in -(r as isize)..=(r as isize) {
                            sum += field.sample(x as isize + dx, y as isize + dy, border);
                        }
                    }
                    sum / (side * side) as f64
                })
            }
            LamVariant::Rdwgif => {
                let ws = mollifier_kernels(r).unwrap().weights().to_vec();
                ImageF::from_fn(w, h, |x, y| {
                    let mut sum = 0.0;
                    for (j, dy) in (-(r as isize)..=(r as isize)).enumerate() {
                        for (i, dx) in (-(r as isize)..=(r as isize)).enumerate() {
                            sum += ws[j * side + i]
                                * field.sample(x as isize + dx, y as isize + dy, border);
                        }
                    }
                    sum
                })
            }
            LamVariant::Skwgif => {
                let kernels = steering_kernels(guide, r, params.steering_h).unwrap();
                ImageF::from_fn(w, h, |x, y| {
                    let ws = kernels.kernel_at(x, y);
                    let mut sum = 0.0;
                    for (j, dy) in (-(r as isize)..=(r as isize)).enumerate() {
                        for (i, dx) in (-(r as isize)..=(r as isize)).enumerate() {
                            sum += ws[j * side + i]
                                * field.sample(x as isize + dx, y as isize + dy, border);
                        }
                    }
                    sum
                })
            }
        }
    };
    let a_bar = averaged(&a_field);
    let b_bar = averaged(&b_field);
    ImageF::from_fn(w, h, |x, y| a_bar.get(x, y) * guide.get(x, y) + b_bar.get(x, y))
}

/// Dense (non-separable) Gaussian convolution.
pub fn dense_gaussian(src: &ImageF, spec: &GaussianSpec, border: BorderPolicy) -> ImageF {
    let k = spec.kernel().unwrap();
    let half = k.len() as isize / 2;
    ImageF::from_fn(src.width(), src.height(), |x, y| {
        let mut acc = 0.0;
        for (j, &wy) in k.iter().enumerate() {
            for (i, &wx) in k.iter().enumerate() {
                acc += wy
                    * wx
                    * src.sample(
                        x as isize + i as isize - half,
                        y as isize + j as isize - half,
                        border,
                    );
            }
        }
        acc
    })
}

/// Direct one-parameter ridge regression per window on the highpass
/// residuals, with plain window averaging of the gain.
pub fn gh_gif_oracle(input: &ImageF, guide: &ImageF, params: &PmgfParams) -> ImageF {
    let (w, h) = (input.width(), input.height());
    let r = params.radius;
    let border = params.border;
    let n = ((2 * r + 1) * (2 * r + 1)) as f64;
    let spec = params.gaussian_spec();
    let guide_low = dense_gaussian(guide, &spec, border);
    let input_low = dense_gaussian(input, &spec, border);
    let hg = guide.sub(&guide_low);
    let hi = input.sub(&input_low);

    let alpha = ImageF::from_fn(w, h, |x, y| {
        let mut num = 0.0;
        let mut den = 0.0;
        for dy in -(r as isize)..=(r as isize) {
            for dx in -(r as isize)..=(r as isize) {
                let g = hg.sample(x as isize + dx, y as isize + dy, border);
                let i = hi.sample(x as isize + dx, y as isize + dy, border);
                num += g * i;
                den += g * g;
            }
        }
        num / (den + n * params.lambda)
    });
    let alpha_bar = ImageF::from_fn(w, h, |x, y| {
        let mut sum = 0.0;
        for dy in -(r as isize)..=(r as isize) {
            for dx in -(r as isize)..=(r as isize) {
                sum += alpha.sample(x as isize + dx, y as isize + dy, border);
            }
        }
        sum / n
    });
    ImageF::from_fn(w, h, |x, y| {
        alpha_bar.get(x, y) * hg.get(x, y) + input_low.get(x, y)
    })
}

/// Load the shipped grayscale benchmark corpus.
pub fn load_corpus() -> Vec<(String, ImageF)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../assets/corpus");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("corpus dir {}: {e}", dir.display()))
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("png"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let img = match ghgif::io::read_image(&p).unwrap() {
                ghgif::io::LoadedImage::Gray(g) => g,
                rgb => rgb.luminance(),
            };
            (name, img)
        })
        .collect()
}

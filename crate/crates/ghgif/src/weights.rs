//! Edge-aware weight fields and the auxiliary averaging kernels consumed by
//! the regularized filter variants.
//!
//! Three weight families modulate the ridge term of the filter cost: `w1`
//! (single-scale local variance), `w2` (multiscale variance product), and
//! `w3` (robust weight from the maximum neighbor difference, calibrated by
//! the median absolute deviation). `gamma_map` is the sigmoid shift target
//! used alongside `w2`. The kernel types provide the two non-arithmetic
//! averaging strategies: a compactly supported mollifier (spatially
//! invariant) and gradient-steered anisotropic kernels (per pixel).

use crate::error::{Error, Result};
use crate::image::{box_mean_unchecked, BorderPolicy, ImageF};

/// Per-pixel positive weight field, same size as the guidance image.
///
/// `degenerate` marks the conventional fallback taken on constant images
/// (zero variance or zero scale estimate), where the defining formula has
/// no information to work with.
#[derive(Debug, Clone)]
pub struct WeightMap {
    pub values: ImageF,
    pub degenerate: bool,
}

impl WeightMap {
    fn new(values: ImageF) -> Self {
        WeightMap {
            values,
            degenerate: false,
        }
    }

    fn degenerate(values: ImageF) -> Self {
        WeightMap {
            values,
            degenerate: true,
        }
    }
}

/// Local variance of `g` in a window of radius `r`, computed from box means
/// and clamped at zero against floating cancellation.
pub(crate) fn local_variance(g: &ImageF, r: usize, border: BorderPolicy) -> ImageF {
    let mean = box_mean_unchecked(g, r, border);
    let mean_sq = box_mean_unchecked(&g.mul(g), r, border);
    mean_sq.zip_map(&mean, |m2, m| (m2 - m * m).max(0.0))
}

fn harmonic_mean_of(values: &ImageF) -> f64 {
    let inv_sum: f64 = values.as_slice().iter().map(|&v| 1.0 / v).sum();
    values.len() as f64 / inv_sum
}

/// Single-scale edge-aware weight: the harmonic mean of the shifted 3x3
/// variances divided by the local shifted variance. Below 1 at edges,
/// above 1 in flat areas, and averaging exactly 1 over the image.
pub fn eaw_w1(g: &ImageF, tau: f64) -> Result<WeightMap> {
    if !(tau > 0.0) {
        return Err(Error::param(format!("tau must be > 0, got {tau}")));
    }
    g.ensure_finite()?;
    let shifted = local_variance(g, 1, BorderPolicy::Replicate).map(|v| v + tau);
    let h = harmonic_mean_of(&shifted);
    Ok(WeightMap::new(shifted.map(|v| h / v)))
}

/// The multiscale variance product `chi = sigma_{3x3} * sigma_{(2r+1)}`,
/// multiplying standard deviations (not variances) of the two scales.
pub(crate) fn chi_field(g: &ImageF, r: usize) -> ImageF {
    let fine = local_variance(g, 1, BorderPolicy::Replicate);
    let coarse = local_variance(g, r, BorderPolicy::Replicate);
    fine.zip_map(&coarse, |a, b| a.sqrt() * b.sqrt())
}

/// Multiscale edge-aware weight built on `chi`; separates long edges from
/// fine detail better than the single-scale `w1`.
pub fn eaw_w2(g: &ImageF, r: usize, tau: f64) -> Result<WeightMap> {
    if !(tau > 0.0) {
        return Err(Error::param(format!("tau must be > 0, got {tau}")));
    }
    if r < 1 {
        return Err(Error::param("radius must be >= 1"));
    }
    g.ensure_finite()?;
    let shifted = chi_field(g, r).map(|v| v + tau);
    let h = harmonic_mean_of(&shifted);
    Ok(WeightMap::new(shifted.map(|v| h / v)))
}

/// Sigmoid shift target in (0, 1): above 1/2 exactly where `chi` exceeds
/// its image mean, saturating toward 1 on the strongest edges.
///
/// On constant images (where the sigmoid slope is undefined) the map is 1/2
/// everywhere and flagged degenerate.
pub fn gamma_map(g: &ImageF, r: usize, _tau: f64) -> Result<WeightMap> {
    if r < 1 {
        return Err(Error::param("radius must be >= 1"));
    }
    g.ensure_finite()?;
    let chi = chi_field(g, r);
    let mean = chi.mean();
    let min = chi.min_value();
    let spread = mean - min;
    if !(spread > 0.0) {
        return Ok(WeightMap::degenerate(ImageF::splat(
            g.width(),
            g.height(),
            0.5,
        )));
    }
    let eta = 4.0 / spread;
    Ok(WeightMap::new(
        chi.map(|c| 1.0 - 1.0 / (1.0 + (eta * (c - mean)).exp())),
    ))
}

/// Maximum neighbor difference: per pixel, the largest absolute difference
/// against its 8-connected neighbors (in-bounds neighbors only).
pub fn mnd(g: &ImageF) -> Result<ImageF> {
    g.ensure_finite()?;
    let (w, h) = (g.width(), g.height());
    Ok(ImageF::from_fn(w, h, |x, y| {
        let center = g.get(x, y);
        let mut best = 0.0f64;
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let nx = x as isize + dx;
                let ny = y as isize + dy;
                if nx >= 0 && ny >= 0 && nx < w as isize && ny < h as isize {
                    best = best.max((g.get(nx as usize, ny as usize) - center).abs());
                }
            }
        }
        best
    }))
}

/// Exact selection median; for an even count this is the lower of the two
/// middle elements, which keeps the estimate reproducible bit for bit.
pub(crate) fn median_lower(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    let idx = (values.len() - 1) / 2;
    let (_, m, _) = values.select_nth_unstable_by(idx, f64::total_cmp);
    *m
}

/// Robust edge-aware weight from the maximum neighbor difference, shaped
/// like a Tukey biweight: 1 on perfectly flat pixels, exactly 0 wherever
/// `|MND| >= c * S(G)` with `S` the MAD scale of the MND field.
///
/// `S(G) = 0` (constant image) falls back to `w3 = 1` everywhere, flagged.
pub fn eaw_w3(g: &ImageF, c: u32) -> Result<WeightMap> {
    if c < 1 {
        return Err(Error::param("scale c must be >= 1"));
    }
    let mnd_field = mnd(g)?;
    let mut buf: Vec<f64> = mnd_field.as_slice().to_vec();
    let med = median_lower(&mut buf);
    let mut dev: Vec<f64> = mnd_field.as_slice().iter().map(|&m| (m - med).abs()).collect();
    let scale = 1.4826 * median_lower(&mut dev);
    if !(scale > 0.0) {
        return Ok(WeightMap::degenerate(ImageF::splat(
            g.width(),
            g.height(),
            1.0,
        )));
    }
    let cutoff = c as f64 * scale;
    Ok(WeightMap::new(mnd_field.map(|m| {
        if m.abs() < cutoff {
            let t = m / cutoff;
            let u = 1.0 - t * t;
            u * u
        } else {
            0.0
        }
    })))
}

/// Spatially invariant averaging kernel over a `(2r+1) x (2r+1)` window,
/// built from the standard smooth bump `exp(-1 / (1 - |t|^2))` with
/// `t = offset / (r + 1)`, normalized to sum 1. The bump vanishes smoothly
/// at the window boundary, so distant samples contribute nothing.
#[derive(Debug, Clone)]
pub struct MollifierKernel {
    radius: usize,
    weights: Vec<f64>,
}

pub fn mollifier_kernels(r: usize) -> Result<MollifierKernel> {
    if r < 1 {
        return Err(Error::param("radius must be >= 1"));
    }
    let side = 2 * r + 1;
    let scale = 1.0 / (r as f64 + 1.0);
    let mut weights = Vec::with_capacity(side * side);
    for dy in -(r as isize)..=(r as isize) {
        for dx in -(r as isize)..=(r as isize) {
            let t2 = ((dx * dx + dy * dy) as f64) * scale * scale;
            weights.push(if t2 < 1.0 {
                (-1.0 / (1.0 - t2)).exp()
            } else {
                0.0
            });
        }
    }
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    Ok(MollifierKernel { radius: r, weights })
}

impl MollifierKernel {
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Normalized kernel weights in row-major window order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Kernel-weighted mean of `src` at every pixel (a dense 2-D
    /// convolution; the bump is not separable).
    pub fn average(&self, src: &ImageF, border: BorderPolicy) -> ImageF {
        let (w, h) = (src.width(), src.height());
        let r = self.radius as isize;
        let side = 2 * self.radius + 1;
        ImageF::from_fn(w, h, |x, y| {
            let mut acc = 0.0;
            for dy in -r..=r {
                let sy = border.map(y as isize + dy, h);
                let row = src.row(sy);
                let krow = &self.weights[((dy + r) as usize) * side..((dy + r) as usize + 1) * side];
                for (k, &kw) in krow.iter().enumerate() {
                    if kw == 0.0 {
                        continue;
                    }
                    let sx = border.map(x as isize + k as isize - r, w);
                    acc += kw * row[sx];
                }
            }
            acc
        })
    }
}

/// Per-pixel anisotropic averaging kernels steered by the local gradient
/// structure of the guidance image.
///
/// For each pixel a 2x2 gradient covariance is gathered over the filter
/// window (Sobel gradients), regularized with `delta * I`, and normalized
/// to unit determinant so only the anisotropy survives; offsets are then
/// weighted by `exp(-d' C d / (2 h^2))`. On constant images this collapses
/// to the isotropic Gaussian of scale `h`. Kernels are expanded lazily:
/// only the quadratic forms are stored.
#[derive(Debug, Clone)]
pub struct SteeringKernels {
    radius: usize,
    h: f64,
    cxx: ImageF,
    cxy: ImageF,
    cyy: ImageF,
}

const STEERING_DELTA: f64 = 1e-4;

pub fn steering_kernels(g: &ImageF, r: usize, h: f64) -> Result<SteeringKernels> {
    if r < 1 {
        return Err(Error::param("radius must be >= 1"));
    }
    if !(h > 0.0) {
        return Err(Error::param(format!("steering scale h must be > 0, got {h}")));
    }
    g.ensure_finite()?;
    let border = BorderPolicy::Replicate;
    let (w, ht) = (g.width(), g.height());

    // Sobel gradients, normalized so a unit step has unit gradient.
    let mut gx = ImageF::zeros(w, ht);
    let mut gy = ImageF::zeros(w, ht);
    for y in 0..ht {
        for x in 0..w {
            let s = |dx: isize, dy: isize| g.sample(x as isize + dx, y as isize + dy, border);
            let dx = (s(1, -1) + 2.0 * s(1, 0) + s(1, 1)) - (s(-1, -1) + 2.0 * s(-1, 0) + s(-1, 1));
            let dy = (s(-1, 1) + 2.0 * s(0, 1) + s(1, 1)) - (s(-1, -1) + 2.0 * s(0, -1) + s(1, -1));
            gx.set(x, y, dx / 8.0);
            gy.set(x, y, dy / 8.0);
        }
    }

    let sxx = box_mean_unchecked(&gx.mul(&gx), r, border);
    let sxy = box_mean_unchecked(&gx.mul(&gy), r, border);
    let syy = box_mean_unchecked(&gy.mul(&gy), r, border);

    // Regularize and rescale each covariance to unit determinant.
    let mut cxx = ImageF::zeros(w, ht);
    let mut cxy = ImageF::zeros(w, ht);
    let mut cyy = ImageF::zeros(w, ht);
    for i in 0..w * ht {
        let a = sxx.as_slice()[i] + STEERING_DELTA;
        let b = sxy.as_slice()[i];
        let d = syy.as_slice()[i] + STEERING_DELTA;
        let det = (a * d - b * b).max(f64::MIN_POSITIVE);
        let s = det.sqrt();
        cxx.as_mut_slice()[i] = a / s;
        cxy.as_mut_slice()[i] = b / s;
        cyy.as_mut_slice()[i] = d / s;
    }

    Ok(SteeringKernels {
        radius: r,
        h,
        cxx,
        cxy,
        cyy,
    })
}

impl SteeringKernels {
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Materialize the normalized kernel at one pixel (row-major window
    /// order); mainly useful for inspection and tests.
    pub fn kernel_at(&self, x: usize, y: usize) -> Vec<f64> {
        let r = self.radius as isize;
        let side = 2 * self.radius + 1;
        let i = y * self.cxx.width() + x;
        let (a, b, d) = (
            self.cxx.as_slice()[i],
            self.cxy.as_slice()[i],
            self.cyy.as_slice()[i],
        );
        let inv = 1.0 / (2.0 * self.h * self.h);
        let mut weights = Vec::with_capacity(side * side);
        for dy in -r..=r {
            for dx in -r..=r {
                let (fx, fy) = (dx as f64, dy as f64);
                let q = a * fx * fx + 2.0 * b * fx * fy + d * fy * fy;
                weights.push((-q * inv).exp());
            }
        }
        let sum: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= sum;
        }
        weights
    }

    /// Steering-weighted mean of `src` at every pixel.
    pub fn average(&self, src: &ImageF, border: BorderPolicy) -> ImageF {
        let (w, h) = (src.width(), src.height());
        let r = self.radius as isize;
        let inv = 1.0 / (2.0 * self.h * self.h);
        ImageF::from_fn(w, h, |x, y| {
            let i = y * w + x;
            let (a, b, d) = (
                self.cxx.as_slice()[i],
                self.cxy.as_slice()[i],
                self.cyy.as_slice()[i],
            );
            let mut acc = 0.0;
            let mut total = 0.0;
            for dy in -r..=r {
                let sy = border.map(y as isize + dy, h);
                let row = src.row(sy);
                let fy = dy as f64;
                for dx in -r..=r {
                    let fx = dx as f64;
                    let q = a * fx * fx + 2.0 * b * fx * fy + d * fy * fy;
                    let kw = (-q * inv).exp();
                    let sx = border.map(x as isize + dx, w);
                    acc += kw * row[sx];
                    total += kw;
                }
            }
            acc / total
        })
    }
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

    fn variance_oracle(g: &ImageF, r: usize, x: usize, y: usize) -> f64 {
        let border = BorderPolicy::Replicate;
        let n = ((2 * r + 1) * (2 * r + 1)) as f64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for dy in -(r as isize)..=(r as isize) {
            for dx in -(r as isize)..=(r as isize) {
                let v = g.sample(x as isize + dx, y as isize + dy, border);
                sum += v;
                sum_sq += v * v;
            }
        }
        let mean = sum / n;
        (sum_sq / n - mean * mean).max(0.0)
    }

    fn w1_oracle(g: &ImageF, tau: f64) -> ImageF {
        let (w, h) = (g.width(), g.height());
        let shifted = ImageF::from_fn(w, h, |x, y| variance_oracle(g, 1, x, y) + tau);
        let inv_sum: f64 = shifted.as_slice().iter().map(|&v| 1.0 / v).sum();
        let hm = shifted.len() as f64 / inv_sum;
        shifted.map(|v| hm / v)
    }

    #[test]
    fn w1_constant_image_is_one() {
        let g = ImageF::splat(8, 8, 0.3);
        let w = eaw_w1(&g, 1e-4).unwrap();
        assert!(!w.degenerate);
        assert!(w.values.map(|v| (v - 1.0).abs()).max_value() < 1e-12);
    }

    #[test]
    fn w1_smaller_at_edges_than_flats() {
        let g = ImageF::from_fn(16, 16, |x, _| if x < 8 { 0.1 } else { 0.9 });
        let w = eaw_w1(&g, 1e-4).unwrap().values;
        let edge = w.get(8, 8);
        let flat = w.get(2, 8);
        assert!(edge < 1.0, "edge weight {edge}");
        assert!(flat > 1.0, "flat weight {flat}");
    }

    #[test]
    fn w1_matches_scalar_oracle() {
        let g = rng_image(8, 8, 42);
        let fast = eaw_w1(&g, 1e-4).unwrap().values;
        let slow = w1_oracle(&g, 1e-4);
        assert!(fast.max_abs_diff(&slow) < 1e-9);
    }

    #[test]
    fn w1_rejects_bad_tau() {
        let g = ImageF::zeros(4, 4);
        assert!(eaw_w1(&g, 0.0).is_err());
        assert!(eaw_w1(&g, -1.0).is_err());
    }

    #[test]
    fn w2_constant_image_is_one() {
        let g = ImageF::splat(8, 8, 0.5);
        let w = eaw_w2(&g, 2, 1e-4).unwrap();
        assert!(w.values.map(|v| (v - 1.0).abs()).max_value() < 1e-12);
    }

    #[test]
    fn w2_matches_scalar_oracle() {
        let g = rng_image(8, 8, 7);
        let tau = 1e-4;
        let r = 2;
        let fast = eaw_w2(&g, r, tau).unwrap().values;
        let (w, h) = (g.width(), g.height());
        let shifted = ImageF::from_fn(w, h, |x, y| {
            variance_oracle(&g, 1, x, y).sqrt() * variance_oracle(&g, r, x, y).sqrt() + tau
        });
        let inv_sum: f64 = shifted.as_slice().iter().map(|&v| 1.0 / v).sum();
        let hm = shifted.len() as f64 / inv_sum;
        let slow = shifted.map(|v| hm / v);
        assert!(fast.max_abs_diff(&slow) < 1e-9);
    }

    #[test]
    fn w2_prefers_long_edge_over_texture() {
        // Fine texture patch top-left, long vertical edge on the right.
        let g = ImageF::from_fn(24, 24, |x, y| {
            if x < 8 && y < 8 {
                if (x + y) % 2 == 0 {
                    0.4
                } else {
                    0.6
                }
            } else if x >= 16 {
                0.95
            } else {
                0.05
            }
        });
        let w = eaw_w2(&g, 4, 1e-4).unwrap().values;
        let at_edge = w.get(16, 12);
        let at_texture = w.get(4, 4);
        assert!(
            at_edge < at_texture,
            "edge {at_edge} should get a smaller weight than texture {at_texture}"
        );
    }

    #[test]
    fn harmonic_mean_normalization_w1_w2() {
        let g = rng_image(12, 12, 99);
        for w in [
            eaw_w1(&g, 1e-4).unwrap().values,
            eaw_w2(&g, 3, 1e-4).unwrap().values,
        ] {
            // Harmonic mean of 1/w is 1, i.e. the weights average to 1.
            let hm_inv = w.len() as f64 / w.as_slice().iter().copied().sum::<f64>();
            assert!((1.0 / hm_inv - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn gamma_half_at_mean_chi_and_monotone() {
        let g = rng_image(8, 8, 3);
        let gamma = gamma_map(&g, 2, 1e-4).unwrap();
        assert!(!gamma.degenerate);
        let chi = chi_field(&g, 2);
        let mean = chi.mean();
        let min = chi.min_value();
        let eta = 4.0 / (mean - min);
        // Scalar-loop oracle.
        let oracle = chi.map(|c| 1.0 - 1.0 / (1.0 + (eta * (c - mean)).exp()));
        assert!(gamma.values.max_abs_diff(&oracle) < 1e-9);
        // Range and monotonicity in chi.
        let mut pairs: Vec<(f64, f64)> = chi
            .as_slice()
            .iter()
            .zip(gamma.values.as_slice())
            .map(|(&c, &gv)| (c, gv))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for win in pairs.windows(2) {
            assert!(win[1].1 >= win[0].1 - 1e-12);
        }
        for &(_, gv) in &pairs {
            assert!(gv > 0.0 && gv < 1.0);
        }
    }

    #[test]
    fn gamma_degenerate_constant_image() {
        let g = ImageF::splat(8, 8, 0.2);
        let gamma = gamma_map(&g, 2, 1e-4).unwrap();
        assert!(gamma.degenerate);
        assert!(gamma.values.map(|v| (v - 0.5).abs()).max_value() < 1e-12);
    }

    #[test]
    fn mnd_constant_and_spike() {
        let g = ImageF::splat(6, 6, 0.7);
        assert!(mnd(&g).unwrap().max_value() == 0.0);

        let mut spike = ImageF::zeros(7, 7);
        spike.set(3, 3, 1.0);
        let m = mnd(&spike).unwrap();
        for y in 0..7 {
            for x in 0..7 {
                let dist = (x as isize - 3).abs().max((y as isize - 3).abs());
                let expect = if dist <= 1 { 1.0 } else { 0.0 };
                assert_eq!(m.get(x, y), expect, "at ({x},{y})");
            }
        }
    }

    #[test]
    fn mnd_matches_scalar_oracle() {
        let g = rng_image(8, 8, 17);
        let m = mnd(&g).unwrap();
        for y in 0..8usize {
            for x in 0..8usize {
                let mut best = 0.0f64;
                for dy in -1isize..=1 {
                    for dx in -1isize..=1 {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let (nx, ny) = (x as isize + dx, y as isize + dy);
                        if nx >= 0 && ny >= 0 && nx < 8 && ny < 8 {
                            best = best
                                .max((g.get(nx as usize, ny as usize) - g.get(x, y)).abs());
                        }
                    }
                }
                assert_eq!(m.get(x, y), best);
            }
        }
    }

    #[test]
    fn w3_constant_image_degenerate() {
        let g = ImageF::splat(8, 8, 0.4);
        let w = eaw_w3(&g, 3).unwrap();
        assert!(w.degenerate);
        assert!(w.values.map(|v| (v - 1.0).abs()).max_value() == 0.0);
    }

    #[test]
    fn w3_matches_scalar_oracle() {
        let g = rng_image(8, 8, 23);
        let c = 3u32;
        let fast = eaw_w3(&g, c).unwrap();
        assert!(!fast.degenerate);

        let m = mnd(&g).unwrap();
        let mut sorted: Vec<f64> = m.as_slice().to_vec();
        sorted.sort_by(f64::total_cmp);
        let med = sorted[(sorted.len() - 1) / 2];
        let mut dev: Vec<f64> = m.as_slice().iter().map(|&v| (v - med).abs()).collect();
        dev.sort_by(f64::total_cmp);
        let s = 1.4826 * dev[(dev.len() - 1) / 2];
        let cutoff = c as f64 * s;
        let slow = m.map(|v| {
            if v.abs() < cutoff {
                let t = v / cutoff;
                (1.0 - t * t) * (1.0 - t * t)
            } else {
                0.0
            }
        });
        assert!(fast.values.max_abs_diff(&slow) < 1e-9);
        // Range invariant and the exact-zero cut.
        for (&v, &mv) in fast.values.as_slice().iter().zip(m.as_slice()) {
            assert!((0.0..=1.0).contains(&v));
            if mv.abs() >= cutoff {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn mollifier_normalized_with_compact_support() {
        for r in [1usize, 4, 8] {
            let k = mollifier_kernels(r).unwrap();
            let sum: f64 = k.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "r={r}");
            assert!(k.weights().iter().all(|&w| w >= 0.0));
        }
        // The bump dies exactly at |offset| = r + 1: for r = 4 the (3, 4)
        // offset sits on the support boundary and the corners lie beyond.
        let k = mollifier_kernels(4).unwrap();
        let at = |dx: isize, dy: isize| k.weights()[((dy + 4) * 9 + dx + 4) as usize];
        assert_eq!(at(3, 4), 0.0);
        assert_eq!(at(-4, -3), 0.0);
        assert_eq!(at(4, 4), 0.0);
        assert!(at(0, 4) > 0.0); // |t| = 4/5 < 1, still inside
        // Corner offsets of the r=1 window sit at |t| < 1 but the bump dies
        // fast there; the center/edge ratio matches the direct formula.
        let k = mollifier_kernels(1).unwrap();
        let center = k.weights()[4];
        let edge = k.weights()[1]; // offset (0, -1), |t| = 1/2
        let expected_ratio = (-1.0f64).exp() / (-1.0f64 / (1.0 - 0.25)).exp();
        assert!((center / edge - expected_ratio).abs() < 1e-9);
    }

    #[test]
    fn mollifier_average_preserves_constants() {
        let k = mollifier_kernels(3).unwrap();
        let img = ImageF::splat(10, 10, 0.8);
        let out = k.average(&img, BorderPolicy::Replicate);
        assert!(out.max_abs_diff(&img) < 1e-9);
    }

    #[test]
    fn steering_constant_image_is_gaussian_of_scale_h() {
        let g = ImageF::splat(12, 12, 0.5);
        let h = 1.5;
        let k = steering_kernels(&g, 2, h).unwrap();
        let kern = k.kernel_at(6, 6);
        // Direct isotropic Gaussian over the same window.
        let mut expected = Vec::new();
        for dy in -2i32..=2 {
            for dx in -2i32..=2 {
                let q = (dx * dx + dy * dy) as f64;
                expected.push((-q / (2.0 * h * h)).exp());
            }
        }
        let sum: f64 = expected.iter().sum();
        for (a, e) in kern.iter().zip(expected) {
            assert!((a - e / sum).abs() < 1e-9);
        }
    }

    #[test]
    fn steering_elongates_along_vertical_edge() {
        let g = ImageF::from_fn(24, 24, |x, _| if x < 12 { 0.0 } else { 1.0 });
        let k = steering_kernels(&g, 3, 2.0).unwrap();
        let kern = k.kernel_at(12, 12);
        let side = 7usize;
        let mut along = 0.0; // vertical offsets (same column as center)
        let mut across = 0.0; // horizontal offsets (same row as center)
        for d in 1..=3usize {
            along += kern[(3 - d) * side + 3] + kern[(3 + d) * side + 3];
            across += kern[3 * side + (3 - d)] + kern[3 * side + (3 + d)];
        }
        assert!(
            along > across,
            "kernel should stretch along the edge: along={along} across={across}"
        );
    }

    #[test]
    fn steering_kernels_normalized() {
        let g = rng_image(10, 10, 5);
        let k = steering_kernels(&g, 2, 1.0).unwrap();
        for y in 0..10 {
            for x in 0..10 {
                let sum: f64 = k.kernel_at(x, y).iter().sum();
                assert!((sum - 1.0).abs() < 1e-9);
            }
        }
    }
}

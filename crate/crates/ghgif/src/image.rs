//! Image container, border handling, and the two workhorse linear filters
//! everything else is built on: an O(N) box mean whose per-pixel cost is
//! independent of the window radius, and a separable truncated Gaussian.

use crate::error::{Error, Result};

/// Single-channel image with `f64` samples stored row-major.
///
/// Sample values are nominally in `[0, 1]`, but intermediates (highpass
/// residuals, log luminance, coefficient fields) are allowed to leave that
/// range. Samples must stay finite; the filter entry points reject NaN and
/// infinity with a diagnostic naming the first offending index.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageF {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImageF {
    /// All-zero image. Panics if either dimension is zero.
    pub fn zeros(width: usize, height: usize) -> Self {
        Self::splat(width, height, 0.0)
    }

    /// Constant image. Panics if either dimension is zero.
    pub fn splat(width: usize, height: usize, value: f64) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        ImageF {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Build an image by evaluating `f(x, y)` at every pixel.
    ///
    /// Panics if a dimension is zero or if `f` produces a non-finite value.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let v = f(x, y);
                assert!(v.is_finite(), "from_fn produced non-finite value at ({x}, {y})");
                data.push(v);
            }
        }
        ImageF {
            width,
            height,
            data,
        }
    }

    /// Internal constructor for buffers whose invariants are guaranteed by
    /// construction.
    pub(crate) fn from_vec_unchecked(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        ImageF {
            width,
            height,
            data,
        }
    }

    /// Wrap an existing row-major buffer, validating the container
    /// invariants (length, non-empty dimensions, finite samples).
    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param("image dimensions must be >= 1"));
        }
        if data.len() != width * height {
            return Err(Error::param(format!(
                "buffer length {} does not match {width}x{height}",
                data.len()
            )));
        }
        let img = ImageF {
            width,
            height,
            data,
        };
        img.ensure_finite()?;
        Ok(img)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction forbids zero-sized images
    }

    pub fn same_size(&self, other: &ImageF) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn expect_same_size(&self, other: &ImageF) -> Result<()> {
        if self.same_size(other) {
            Ok(())
        } else {
            Err(Error::dims(self.width, self.height, other.width, other.height))
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    /// Sample with border extension; `x` and `y` may fall outside the raster.
    #[inline]
    pub fn sample(&self, x: isize, y: isize, border: BorderPolicy) -> f64 {
        let xi = border.map(x, self.width);
        let yi = border.map(y, self.height);
        self.data[yi * self.width + xi]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Verify every sample is finite; names the first offender on failure.
    pub fn ensure_finite(&self) -> Result<()> {
        for (index, &value) in self.data.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    index,
                    x: index % self.width,
                    y: index / self.width,
                    value,
                });
            }
        }
        Ok(())
    }

    /// Elementwise map into a new image.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> ImageF {
        ImageF {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise combination of two same-sized images.
    /// Panics on dimension mismatch; callers validate sizes at API entry.
    pub fn zip_map(&self, other: &ImageF, mut f: impl FnMut(f64, f64) -> f64) -> ImageF {
        assert!(self.same_size(other), "zip_map dimension mismatch");
        ImageF {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ImageF) -> ImageF {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn add(&self, other: &ImageF) -> ImageF {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &ImageF) -> ImageF {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> ImageF {
        self.map(|v| v * s)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest absolute difference against another image of the same size.
    pub fn max_abs_diff(&self, other: &ImageF) -> f64 {
        assert!(self.same_size(other), "max_abs_diff dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Clamp all samples into `[0, 1]` (used on export, never internally).
    pub fn clamped01(&self) -> ImageF {
        self.map(|v| v.clamp(0.0, 1.0))
    }
}

/// How reads outside the raster are resolved. Indices are mapped back into
/// bounds before any memory access, so padding never reads out of range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BorderPolicy {
    /// Repeat the nearest edge sample (`aaa|abc|ccc`). The default: it adds
    /// no new intensity transitions at the frame, so filters do not ring
    /// against the border.
    #[default]
    Replicate,
    /// Mirror about the edge, edge sample included (`cba|abc|cba`).
    Reflect,
}

impl BorderPolicy {
    /// Map a possibly out-of-range coordinate into `[0, n)`.
    #[inline]
    pub fn map(self, i: isize, n: usize) -> usize {
        let n = n as isize;
        match self {
            BorderPolicy::Replicate => i.clamp(0, n - 1) as usize,
            BorderPolicy::Reflect => {
                // Fold into one mirror period of length 2n.
                let m = i.rem_euclid(2 * n);
                if m < n {
                    m as usize
                } else {
                    (2 * n - 1 - m) as usize
                }
            }
        }
    }
}

impl std::str::FromStr for BorderPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "replicate" => Ok(BorderPolicy::Replicate),
            "reflect" => Ok(BorderPolicy::Reflect),
            other => Err(Error::param(format!(
                "unknown border policy '{other}' (expected 'replicate' or 'reflect')"
            ))),
        }
    }
}

/// Truncated, renormalized Gaussian kernel specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    /// Standard deviation in pixels. Must be positive.
    pub sigma: f64,
    /// Kernel support as a multiple of sigma. The kernel spans
    /// `ceil(truncation * sigma)` taps on each side of the center.
    pub truncation: f64,
}

impl GaussianSpec {
    /// Kernel with the default 3-sigma support (covers > 99.7% of the mass
    /// before renormalization).
    pub fn new(sigma: f64) -> Self {
        GaussianSpec {
            sigma,
            truncation: 3.0,
        }
    }

    pub fn with_truncation(sigma: f64, truncation: f64) -> Self {
        GaussianSpec { sigma, truncation }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::param(format!("sigma must be > 0, got {}", self.sigma)));
        }
        if !(self.truncation > 0.0) || !self.truncation.is_finite() {
            return Err(Error::param(format!(
                "truncation must be > 0, got {}",
                self.truncation
            )));
        }
        Ok(())
    }

    /// Half-width of the discrete kernel (taps each side of the center).
    pub fn half_width(&self) -> usize {
        ((self.truncation * self.sigma).ceil() as usize).max(1)
    }

    /// The normalized 1-D kernel, symmetric about its center, summing to 1.
    pub fn kernel(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let half = self.half_width() as isize;
        let inv_two_sigma_sq = 1.0 / (2.0 * self.sigma * self.sigma);
        let mut weights: Vec<f64> = (-half..=half)
            .map(|k| (-(k * k) as f64 * inv_two_sigma_sq).exp())
            .collect();
        let sum: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= sum;
        }
        Ok(weights)
    }
}

/// Mean of `src` over the `(2r+1) x (2r+1)` window centered at each pixel,
/// with border extension.
///
/// Two passes of 1-D running sums (horizontal then vertical) make the cost
/// per pixel independent of `r`. Sums are accumulated in `f64` throughout.
pub fn box_mean(src: &ImageF, r: usize, border: BorderPolicy) -> Result<ImageF> {
    if r < 1 {
        return Err(Error::param("box radius must be >= 1"));
    }
    src.ensure_finite()?;
    Ok(box_mean_unchecked(src, r, border))
}

/// `box_mean` without the finiteness scan, for internal pipelines that have
/// already validated their inputs.
pub(crate) fn box_mean_unchecked(src: &ImageF, r: usize, border: BorderPolicy) -> ImageF {
    let (w, h) = (src.width, src.height);
    let window = 2 * r + 1;

    // Horizontal pass: running sums over a border-padded row, appended row
    // by row (no redundant zero-fill of the buffer).
    let mut hsum_data = Vec::with_capacity(w * h);
    let mut padded = vec![0.0f64; w + 2 * r];
    for y in 0..h {
        let row = src.row(y);
        for (i, p) in padded.iter_mut().enumerate() {
            *p = row[border.map(i as isize - r as isize, w)];
        }
        let mut acc: f64 = padded[..window].iter().sum();
        hsum_data.push(acc);
        for x in 1..w {
            acc += padded[x + window - 1] - padded[x - 1];
            hsum_data.push(acc);
        }
    }
    let hsum = ImageF {
        width: w,
        height: h,
        data: hsum_data,
    };

    // Vertical pass: a rolling per-column accumulator over padded rows.
    let inv_area = 1.0 / (window * window) as f64;
    let mut out_data = Vec::with_capacity(w * h);
    let mut acc = vec![0.0f64; w];
    for k in -(r as isize)..=(r as isize) {
        let row = hsum.row(border.map(k, h));
        for (a, &v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    for y in 0..h {
        out_data.extend(acc.iter().map(|&a| a * inv_area));
        if y + 1 < h {
            let enter = hsum.row(border.map(y as isize + 1 + r as isize, h));
            let leave = hsum.row(border.map(y as isize - r as isize, h));
            for ((a, &e), &l) in acc.iter_mut().zip(enter).zip(leave) {
                *a += e - l;
            }
        }
    }
    ImageF {
        width: w,
        height: h,
        data: out_data,
    }
}

/// Separable convolution with the normalized truncated Gaussian: horizontal
/// pass, then vertical. Constants are preserved up to normalization error.
pub fn gaussian_blur(src: &ImageF, spec: &GaussianSpec, border: BorderPolicy) -> Result<ImageF> {
    let kernel = spec.kernel()?;
    src.ensure_finite()?;
    Ok(gaussian_blur_with_kernel(src, &kernel, border))
}

pub(crate) fn gaussian_blur_with_kernel(
    src: &ImageF,
    kernel: &[f64],
    border: BorderPolicy,
) -> ImageF {
    let (w, h) = (src.width, src.height);
    let half = kernel.len() / 2;
    let center = kernel[half];

    // Both passes exploit the kernel's exact symmetry, folding the taps at
    // +k and -k into one weighted sum, and run as contiguous sweeps over a
    // reused row buffer so the inner loops vectorize and no large buffer
    // gets zero-filled just to be overwritten.
    let mut row_buf = vec![0.0f64; w];

    // Horizontal pass over a padded copy of each row.
    let mut tmp_data = Vec::with_capacity(w * h);
    let mut padded = vec![0.0f64; w + 2 * half];
    for y in 0..h {
        let row = src.row(y);
        for (i, p) in padded.iter_mut().enumerate() {
            *p = row[border.map(i as isize - half as isize, w)];
        }
        for (o, &p) in row_buf.iter_mut().zip(&padded[half..half + w]) {
            *o = center * p;
        }
        for k in 1..=half {
            let kw = kernel[half + k];
            let left = &padded[half - k..half - k + w];
            let right = &padded[half + k..half + k + w];
            for ((o, &l), &r) in row_buf.iter_mut().zip(left).zip(right) {
                *o += kw * (l + r);
            }
        }
        tmp_data.extend_from_slice(&row_buf);
    }
    let tmp = ImageF {
        width: w,
        height: h,
        data: tmp_data,
    };

    // Vertical pass as row-wise accumulation, sequential in memory
    // regardless of kernel length.
    let mut out_data = Vec::with_capacity(w * h);
    for y in 0..h {
        let y = y as isize;
        let crow = tmp.row(border.map(y, h));
        for (d, &s) in row_buf.iter_mut().zip(crow) {
            *d = center * s;
        }
        for k in 1..=half {
            let kw = kernel[half + k];
            let up = tmp.row(border.map(y - k as isize, h));
            let down = tmp.row(border.map(y + k as isize, h));
            for ((d, &u), &v) in row_buf.iter_mut().zip(up).zip(down) {
                *d += kw * (u + v);
            }
        }
        out_data.extend_from_slice(&row_buf);
    }
    ImageF {
        width: w,
        height: h,
        data: out_data,
    }
}

/// Gaussian highpass residual: `src - gaussian_blur(src)`. Adding the
/// lowpass back reconstructs the input exactly up to floating addition.
pub fn highpass(src: &ImageF, spec: &GaussianSpec, border: BorderPolicy) -> Result<ImageF> {
    let low = gaussian_blur(src, spec, border)?;
    Ok(src.sub(&low))
}

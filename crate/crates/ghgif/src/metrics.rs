//! Full-reference quality metrics: PSNR and SSIM.

use crate::error::{Error, Result};
use crate::image::ImageF;

/// PSNR/SSIM pair for one comparison. `psnr_db` is `f64::INFINITY` when the
/// images are identical (zero mean squared error).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub psnr_db: f64,
    pub ssim: f64,
}

/// Peak signal-to-noise ratio in decibels against the given peak value
/// (1.0 for the `[0,1]` convention used throughout this crate).
pub fn psnr(x: &ImageF, y: &ImageF, peak: f64) -> Result<f64> {
    x.expect_same_size(y)?;
    if !(peak > 0.0) {
        return Err(Error::param(format!("peak must be > 0, got {peak}")));
    }
    let mut sum = 0.0;
    for (&a, &b) in x.as_slice().iter().zip(y.as_slice()) {
        let d = a - b;
        sum += d * d;
    }
    let mse = sum / x.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;
const SSIM_PEAK: f64 = 1.0;

fn ssim_window_weights() -> Vec<f64> {
    let half = (SSIM_WINDOW / 2) as isize;
    let mut w = Vec::with_capacity(SSIM_WINDOW * SSIM_WINDOW);
    for dy in -half..=half {
        for dx in -half..=half {
            let q = (dx * dx + dy * dy) as f64;
            w.push((-q / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp());
        }
    }
    let sum: f64 = w.iter().sum();
    for v in &mut w {
        *v /= sum;
    }
    w
}

/// Mean structural similarity with the reference settings: 11x11 Gaussian
/// window of sigma 1.5, K1 = 0.01, K2 = 0.03, peak 1.0. Local statistics
/// are evaluated only where the window fits entirely inside both images,
/// so the minimum image side is 11.
pub fn ssim(x: &ImageF, y: &ImageF) -> Result<f64> {
    x.expect_same_size(y)?;
    if x.width() < SSIM_WINDOW || x.height() < SSIM_WINDOW {
        return Err(Error::param(format!(
            "ssim needs both sides >= {SSIM_WINDOW}, got {}x{}",
            x.width(),
            x.height()
        )));
    }
    let weights = ssim_window_weights();
    let c1 = (SSIM_K1 * SSIM_PEAK) * (SSIM_K1 * SSIM_PEAK);
    let c2 = (SSIM_K2 * SSIM_PEAK) * (SSIM_K2 * SSIM_PEAK);

    let (w, h) = (x.width(), x.height());
    let mut total = 0.0;
    let mut count = 0usize;
    for cy in 0..=(h - SSIM_WINDOW) {
        for cx in 0..=(w - SSIM_WINDOW) {
            let mut mx = 0.0;
            let mut my = 0.0;
            let mut mxx = 0.0;
            let mut myy = 0.0;
            let mut mxy = 0.0;
            let mut k = 0;
            for dy in 0..SSIM_WINDOW {
                let rx = &x.row(cy + dy)[cx..cx + SSIM_WINDOW];
                let ry = &y.row(cy + dy)[cx..cx + SSIM_WINDOW];
                for i in 0..SSIM_WINDOW {
                    let wgt = weights[k];
                    k += 1;
                    let (a, b) = (rx[i], ry[i]);
                    mx += wgt * a;
                    my += wgt * b;
                    mxx += wgt * a * a;
                    myy += wgt * b * b;
                    mxy += wgt * a * b;
                }
            }
            let vx = mxx - mx * mx;
            let vy = myy - my * my;
            let cxy = mxy - mx * my;
            let l = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
            let cs = (2.0 * cxy + c2) / (vx + vy + c2);
            total += l * cs;
            count += 1;
        }
    }
    Ok(total / count as f64)
}

/// Convenience wrapper computing both metrics at peak 1.0.
pub fn metric_report(x: &ImageF, y: &ImageF) -> Result<MetricReport> {
    Ok(MetricReport {
        psnr_db: psnr(x, y, 1.0)?,
        ssim: ssim(x, y)?,
    })
}

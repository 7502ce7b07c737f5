//! Deterministic synthetic test scenes.
//!
//! These generators back the shipped benchmark corpus and the test suite:
//! step edges with controlled variance ratios, checkerboard textures,
//! plateau scenes, and a cat-like step/texture subject. Everything is a
//! pure function of its arguments (noise comes from a tiny internal
//! xorshift generator keyed by an explicit seed), so regenerated images
//! are bit-identical.

use crate::image::ImageF;

/// Minimal xorshift64* generator: deterministic, seed-stable, good enough
/// for texture noise. Not for cryptography or statistics.
#[derive(Debug, Clone)]
pub struct TinyRng {
    state: u64,
}

impl TinyRng {
    pub fn new(seed: u64) -> Self {
        TinyRng {
            state: seed.wrapping_mul(0x9E3779B97F4A7C15) | 1,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state ^= self.state >> 12;
        self.state ^= self.state << 25;
        self.state ^= self.state >> 27;
        self.state.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_f64().max(f64::MIN_POSITIVE);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Uniform noise image in `[0, 1)`.
pub fn uniform_noise(width: usize, height: usize, seed: u64) -> ImageF {
    let mut rng = TinyRng::new(seed);
    ImageF::from_fn(width, height, |_, _| rng.next_f64())
}

/// Vertical step edge: `low` for `x < edge_x`, `high` elsewhere.
pub fn step_edge(width: usize, height: usize, low: f64, high: f64, edge_x: usize) -> ImageF {
    ImageF::from_fn(width, height, |x, _| if x < edge_x { low } else { high })
}

/// Step edge with a horizontal sinusoidal ripple of the given amplitude and
/// period superimposed on both plateaus.
pub fn step_with_ripple(
    width: usize,
    height: usize,
    low: f64,
    high: f64,
    edge_x: usize,
    ripple_amplitude: f64,
    ripple_period: usize,
) -> ImageF {
    ImageF::from_fn(width, height, |x, _| {
        let base = if x < edge_x { low } else { high };
        base + ripple_amplitude
            * (2.0 * std::f64::consts::PI * x as f64 / ripple_period as f64).sin()
    })
}

/// Two-tone checkerboard with square cells of `period` pixels.
pub fn checkerboard(width: usize, height: usize, period: usize, lo: f64, hi: f64) -> ImageF {
    assert!(period >= 1);
    ImageF::from_fn(width, height, |x, y| {
        if (x / period + y / period).is_multiple_of(2) {
            lo
        } else {
            hi
        }
    })
}

/// Checkerboard texture riding on a step edge: the texture-removal test
/// subject (small-scale structure to kill, one large edge to keep).
pub fn textured_step(width: usize, height: usize) -> ImageF {
    let edge = width / 2;
    ImageF::from_fn(width, height, |x, y| {
        let base = if x < edge { 0.25 } else { 0.75 };
        let tex = if (x / 2 + y / 2) % 2 == 0 { -0.08 } else { 0.08 };
        base + tex
    })
}

/// A cat-like synthetic: a bright silhouette (round body, head, two
/// triangular ears) over a dark background, with fine fur texture inside
/// the silhouette and two whisker strokes. Strong steps at the silhouette,
/// fine detail within; the classic smoothing test subject.
pub fn cat_scene(width: usize, height: usize, seed: u64) -> ImageF {
    let mut rng = TinyRng::new(seed);
    let (w, h) = (width as f64, height as f64);
    let body = (0.5 * w, 0.66 * h, 0.27 * w.min(h));
    let head = (0.5 * w, 0.33 * h, 0.17 * w.min(h));
    let inside = move |x: f64, y: f64| {
        let in_body =
            (x - body.0).powi(2) + (y - body.1).powi(2) <= body.2 * body.2;
        let in_head =
            (x - head.0).powi(2) + (y - head.1).powi(2) <= head.2 * head.2;
        // Ears: triangles above the head.
        let ear = |cx: f64| {
            let dx = (x - cx).abs();
            let top = head.1 - 1.9 * head.2;
            y >= top && y <= head.1 - 0.6 * head.2 && dx <= 0.35 * head.2 * (y - top) / head.2
        };
        in_body || in_head || ear(head.0 - 0.8 * head.2) || ear(head.0 + 0.8 * head.2)
    };
    ImageF::from_fn(width, height, |xi, yi| {
        let (x, y) = (xi as f64, yi as f64);
        if inside(x, y) {
            // Fur: banded noise texture.
            let fur = 0.06 * ((x * 0.9 + y * 0.3).sin() * 0.5 + (rng.next_f64() - 0.5));
            // Whiskers: two thin dark strokes across the head.
            let whisker = ((y - (head.1 + 0.2 * head.2)).abs() < 0.7
                || (y - (head.1 + 0.45 * head.2)).abs() < 0.7)
                && (x - head.0).abs() < 1.6 * head.2;
            if whisker {
                0.35
            } else {
                (0.78 + fur).clamp(0.0, 1.0)
            }
        } else {
            0.12 + 0.04 * (y / h)
        }
    })
}

/// Smooth diagonal gradient with a bright disc and a dark rectangle.
pub fn gradient_shapes(width: usize, height: usize) -> ImageF {
    let (w, h) = (width as f64, height as f64);
    ImageF::from_fn(width, height, |xi, yi| {
        let (x, y) = (xi as f64, yi as f64);
        let g = 0.25 + 0.5 * (x / w + y / h) / 2.0;
        let in_disc = (x - 0.3 * w).powi(2) + (y - 0.35 * h).powi(2) <= (0.16 * w).powi(2);
        let in_rect =
            x >= 0.55 * w && x <= 0.85 * w && y >= 0.55 * h && y <= 0.8 * h;
        if in_disc {
            0.9
        } else if in_rect {
            0.08
        } else {
            g
        }
    })
}

/// Sum of Gaussian bumps of assorted scales on a mid-gray field.
pub fn gaussian_blobs(width: usize, height: usize) -> ImageF {
    let centers = [
        (0.25, 0.25, 0.06, 0.5),
        (0.7, 0.3, 0.12, -0.35),
        (0.4, 0.7, 0.05, 0.45),
        (0.75, 0.75, 0.18, 0.3),
        (0.15, 0.8, 0.04, -0.3),
    ];
    let (w, h) = (width as f64, height as f64);
    ImageF::from_fn(width, height, |xi, yi| {
        let (x, y) = (xi as f64 / w, yi as f64 / h);
        let mut v: f64 = 0.45;
        for &(cx, cy, s, amp) in &centers {
            let d2 = (x - cx).powi(2) + (y - cy).powi(2);
            v += amp * (-d2 / (2.0 * s * s)).exp();
        }
        v.clamp(0.0, 1.0)
    })
}

/// Piecewise plateaus with fine stochastic texture: flat structure the
/// affine family flattens and the highpass family should keep.
pub fn plateau_texture(width: usize, height: usize, seed: u64) -> ImageF {
    let mut rng = TinyRng::new(seed);
    ImageF::from_fn(width, height, |x, y| {
        let plateau = match (3 * x / width, 2 * y / height) {
            (0, 0) => 0.2,
            (1, 0) => 0.55,
            (2, 0) => 0.85,
            (0, 1) => 0.7,
            (1, 1) => 0.35,
            _ => 0.6,
        };
        (plateau + 0.09 * (rng.next_f64() - 0.5)).clamp(0.0, 1.0)
    })
}

/// Bar gratings of two orientations and frequencies over a gradient.
pub fn grating_mix(width: usize, height: usize) -> ImageF {
    let (w, h) = (width as f64, height as f64);
    ImageF::from_fn(width, height, |xi, yi| {
        let (x, y) = (xi as f64, yi as f64);
        let base = 0.3 + 0.3 * x / w;
        let v = if y < h / 2.0 {
            base + 0.18 * (2.0 * std::f64::consts::PI * x / 6.0).sin()
        } else {
            base + 0.18 * (2.0 * std::f64::consts::PI * y / 12.0).sin()
        };
        v.clamp(0.0, 1.0)
    })
}

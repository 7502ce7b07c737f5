//! Acceptance criterion 6: runtime behavior. Kept in its own test binary
//! so no other test shares the process while wall clocks run.
//!
//! Three sub-checks: GH-GIF keeps pace with GIF (median of 100 runs within
//! 1.1x), both filters scale linearly in pixel count (2x pixels within
//! 2x +- 30%), and the box mean's per-pixel cost is independent of the
//! radius (r = 4 vs r = 32 within 1.5x).

use ghgif::image::{box_mean, BorderPolicy};
use ghgif::lam::{lam_filter, LamParams};
use ghgif::pmgf::{pmgf_filter, PmgfParams};
use ghgif::synth::uniform_noise;
use std::time::Instant;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn time_runs(runs: usize, mut f: impl FnMut()) -> f64 {
    let mut times = Vec::with_capacity(runs);
    for _ in 0..runs {
        let start = Instant::now();
        f();
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    median(times)
}

#[test]
fn criterion_06_runtime_parity_and_scaling() {
    let img = uniform_noise(512, 512, 3);
    let gif = LamParams::gif(4, 0.04);
    let gh = PmgfParams::gh_gif(4, 0.004);

    // Warmup.
    for _ in 0..3 {
        lam_filter(&img, &img, &gif).unwrap();
        pmgf_filter(&img, &img, &gh).unwrap();
    }

    // Parity: medians over 100 runs on 512x512 at equal radius.
    let gif_ms = time_runs(100, || {
        lam_filter(&img, &img, &gif).unwrap();
    });
    let gh_ms = time_runs(100, || {
        pmgf_filter(&img, &img, &gh).unwrap();
    });
    let ratio = gh_ms / gif_ms;
    assert!(
        ratio <= 1.1,
        "GH-GIF median {gh_ms:.2} ms vs GIF {gif_ms:.2} ms (ratio {ratio:.3} > 1.1)"
    );

    // Linear scaling: doubling the pixel count scales both filters by
    // 2x +- 30%.
    let img2 = uniform_noise(512, 1024, 9);
    for _ in 0..2 {
        lam_filter(&img2, &img2, &gif).unwrap();
        pmgf_filter(&img2, &img2, &gh).unwrap();
    }
    let gif2_ms = time_runs(25, || {
        lam_filter(&img2, &img2, &gif).unwrap();
    });
    let gif1_ms = time_runs(25, || {
        lam_filter(&img, &img, &gif).unwrap();
    });
    let gh2_ms = time_runs(25, || {
        pmgf_filter(&img2, &img2, &gh).unwrap();
    });
    let gh1_ms = time_runs(25, || {
        pmgf_filter(&img, &img, &gh).unwrap();
    });
    let gif_scale = gif2_ms / gif1_ms;
    let gh_scale = gh2_ms / gh1_ms;
    assert!(
        (1.4..=2.6).contains(&gif_scale),
        "GIF scaling {gif_scale:.2} outside 2x +- 30%"
    );
    assert!(
        (1.4..=2.6).contains(&gh_scale),
        "GH-GIF scaling {gh_scale:.2} outside 2x +- 30%"
    );

    // Box mean cost independent of radius on a 2048x2048 image.
    let big = uniform_noise(2048, 2048, 5);
    box_mean(&big, 4, BorderPolicy::Replicate).unwrap();
    let r4_ms = time_runs(7, || {
        box_mean(&big, 4, BorderPolicy::Replicate).unwrap();
    });
    let r32_ms = time_runs(7, || {
        box_mean(&big, 32, BorderPolicy::Replicate).unwrap();
    });
    let box_ratio = (r32_ms / r4_ms).max(r4_ms / r32_ms);
    assert!(
        box_ratio < 1.5,
        "box mean r=4 {r4_ms:.2} ms vs r=32 {r32_ms:.2} ms (ratio {box_ratio:.2})"
    );

    println!(
        "[PASS] criterion 6: runtime (gh/gif ratio {ratio:.3}, scaling gif {gif_scale:.2} / gh {gh_scale:.2}, box r-ratio {box_ratio:.2})"
    );
}

//! The `selftest` subcommand: identities that must hold by construction.
//! Any violation exits with code 4.

use ghgif::image::{box_mean, gaussian_blur, highpass, BorderPolicy, GaussianSpec, ImageF};
use ghgif::pmgf::{pmgf_filter, structure_transfer_decomposition, PmgfParams, PmgfVariant};
use ghgif::synth::TinyRng;
use ghgif::weights::{eaw_w1, mollifier_kernels, steering_kernels};

use crate::error::{CliError, CliResult};
use crate::SelftestArgs;

fn random_image(rng: &mut TinyRng, w: usize, h: usize) -> ImageF {
    ImageF::from_fn(w, h, |_, _| rng.next_f64())
}

fn check(name: &str, ok: bool, detail: String) -> CliResult<()> {
    if ok {
        println!("ok {name}");
        Ok(())
    } else {
        Err(CliError::Inconsistency(format!("{name}: {detail}")))
    }
}

pub fn run(args: SelftestArgs) -> CliResult<()> {
    let mut rng = TinyRng::new(args.seed);

    // Highpass + lowpass reconstructs the input.
    let img = random_image(&mut rng, 48, 40);
    let spec = GaussianSpec::new(2.0);
    let low = gaussian_blur(&img, &spec, BorderPolicy::Replicate)?;
    let high = highpass(&img, &spec, BorderPolicy::Replicate)?;
    let residual = low.add(&high).max_abs_diff(&img);
    check(
        "highpass identity",
        residual < 1e-9,
        format!("residual {residual:.3e}"),
    )?;

    // Structure transfer identity for every highpass-family variant.
    let input = random_image(&mut rng, 40, 32);
    let guide = random_image(&mut rng, 40, 32);
    for variant in [
        PmgfVariant::GhGif,
        PmgfVariant::GhWgif,
        PmgfVariant::GhGgif,
        PmgfVariant::GhSkwgif,
        PmgfVariant::GhRdwgif,
    ] {
        let params = PmgfParams::new(variant, 3, 0.004);
        let out = pmgf_filter(&input, &guide, &params)?;
        structure_transfer_decomposition(&out, &input, &guide, &params)?;
        println!("ok structure transfer ({})", variant.name());
    }

    // Box mean against a direct windowed sum.
    let img = random_image(&mut rng, 24, 20);
    let fast = box_mean(&img, 3, BorderPolicy::Replicate)?;
    let mut worst: f64 = 0.0;
    for y in 0..img.height() {
        for x in 0..img.width() {
            let mut sum = 0.0;
            for dy in -3isize..=3 {
                for dx in -3isize..=3 {
                    sum += img.sample(x as isize + dx, y as isize + dy, BorderPolicy::Replicate);
                }
            }
            worst = worst.max((fast.get(x, y) - sum / 49.0).abs());
        }
    }
    check("box mean vs direct sum", worst < 1e-6, format!("worst {worst:.3e}"))?;

    // Kernel normalization.
    let m = mollifier_kernels(4)?;
    let msum: f64 = m.weights().iter().sum();
    check(
        "mollifier normalization",
        (msum - 1.0).abs() < 1e-9,
        format!("sum {msum}"),
    )?;
    let sk = steering_kernels(&guide, 3, 1.5)?;
    let ksum: f64 = sk.kernel_at(20, 16).iter().sum();
    check(
        "steering kernel normalization",
        (ksum - 1.0).abs() < 1e-9,
        format!("sum {ksum}"),
    )?;

    // Edge-aware weights average to one (harmonic-mean construction).
    let w1 = eaw_w1(&guide, 1e-4)?.values;
    let mean_w1 = w1.mean();
    check(
        "w1 harmonic-mean normalization",
        (mean_w1 - 1.0).abs() < 1e-6,
        format!("mean {mean_w1}"),
    )?;

    // Gaussian kernel symmetry and mass.
    let k = GaussianSpec::new(1.5).kernel()?;
    let ksum: f64 = k.iter().sum();
    let symmetric = (0..k.len() / 2).all(|i| k[i] == k[k.len() - 1 - i]);
    check(
        "gaussian kernel normalization",
        (ksum - 1.0).abs() < 1e-12 && symmetric,
        format!("sum {ksum} symmetric {symmetric}"),
    )?;

    println!("selftest passed");
    Ok(())
}

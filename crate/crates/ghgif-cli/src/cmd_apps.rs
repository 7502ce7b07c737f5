//! Application subcommands: enhance, tonemap, dehaze, texture. Every run
//! writes its outputs plus a JSON sidecar (`<output>.params.json`) holding
//! the full effective parameter set.

use std::path::{Path, PathBuf};

use ghgif::apps::{
    dehaze, detail_enhance, rgf_texture_removal, tone_map_gray, tone_map_rgb, DehazeParams,
    EnhanceParams, RgfParams, ToneMapParams,
};
use ghgif::io::LoadedImage;
use ghgif::ImageF;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::imgio::{load, resolve_filter, save, ResolvedFilter};
use crate::{DehazeArgs, EnhanceArgs, TextureArgs, TonemapArgs};

fn write_sidecar(output: &Path, payload: serde_json::Value) -> CliResult<()> {
    let mut path = output.as_os_str().to_owned();
    path.push(".params.json");
    let text = serde_json::to_string_pretty(&payload)
        .map_err(|e| CliError::io(format!("sidecar: {e}")))?;
    std::fs::write(PathBuf::from(path), text)?;
    Ok(())
}

fn filter_json(resolved: &ResolvedFilter) -> serde_json::Value {
    json!({
        "variant": resolved.variant,
        "r": resolved.r,
        "eps": resolved.eps,
        "lambda": resolved.lambda,
        "sigma": resolved.sigma,
        "border": resolved.border,
    })
}

fn map_planes(image: &LoadedImage, f: impl Fn(&ImageF) -> CliResult<ImageF>) -> CliResult<LoadedImage> {
    match image {
        LoadedImage::Gray(g) => Ok(LoadedImage::Gray(f(g)?)),
        LoadedImage::Rgb([r, g, b]) => Ok(LoadedImage::Rgb([f(r)?, f(g)?, f(b)?])),
    }
}

fn clamp_loaded(image: &LoadedImage) -> LoadedImage {
    match image {
        LoadedImage::Gray(g) => LoadedImage::Gray(g.clamped01()),
        LoadedImage::Rgb([r, g, b]) => {
            LoadedImage::Rgb([r.clamped01(), g.clamped01(), b.clamped01()])
        }
    }
}

pub fn run_enhance(args: EnhanceArgs) -> CliResult<()> {
    let resolved = resolve_filter(&args.opts, 16, 0.01)?;
    let input = load(&args.input)?;
    let params = EnhanceParams {
        k: args.k,
        filter: resolved.filter.clone(),
    };
    let enhanced = map_planes(&input, |plane| Ok(detail_enhance(plane, &params)?))?;
    save(&args.output, &clamp_loaded(&enhanced))?;
    write_sidecar(
        &args.output,
        json!({
            "command": "enhance",
            "k": args.k,
            "filter": filter_json(&resolved),
        }),
    )?;
    println!("enhanced -> {}", args.output.display());
    Ok(())
}

/// Insert `_cX.XX` before the output extension for the compression sweep.
fn sweep_path(output: &Path, c: f64) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = output
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "png".into());
    output.with_file_name(format!("{stem}_c{c:.2}.{ext}"))
}

pub fn run_tonemap(args: TonemapArgs) -> CliResult<()> {
    let resolved = resolve_filter(&args.opts, 16, 0.25)?;
    let is_hdr = args
        .input
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.eq_ignore_ascii_case("hdr"))
        .unwrap_or(false);

    let sweep: Vec<f64> = match args.compression {
        Some(c) => vec![c],
        None => vec![0.3, 0.4, 0.5],
    };
    let mut results = Vec::new();
    for &c in &sweep {
        let mut params = ToneMapParams::new(c, resolved.filter.clone());
        params.target_contrast = args.target_contrast;
        let (out_path, effective) = if is_hdr {
            let rgb = ghgif::io::read_hdr(&args.input)?;
            let (mapped, eff) = tone_map_rgb(&rgb, &params)?;
            let path = if sweep.len() == 1 {
                args.output.clone()
            } else {
                sweep_path(&args.output, c)
            };
            save(&path, &LoadedImage::Rgb(mapped))?;
            (path, eff)
        } else {
            // Non-HDR inputs are treated as linear gray radiance.
            let radiance = load(&args.input)?.luminance();
            let (mapped, eff) = tone_map_gray(&radiance, &params)?;
            let path = if sweep.len() == 1 {
                args.output.clone()
            } else {
                sweep_path(&args.output, c)
            };
            save(&path, &LoadedImage::Gray(mapped.clamped01()))?;
            (path, eff)
        };
        println!(
            "tonemapped c={c} (effective {effective:.4}) -> {}",
            out_path.display()
        );
        results.push(json!({
            "requested_c": c,
            "effective_c": effective,
            "output": out_path.display().to_string(),
        }));
    }
    write_sidecar(
        &args.output,
        json!({
            "command": "tonemap",
            "target_contrast": args.target_contrast,
            "sweep": results,
            "filter": filter_json(&resolved),
        }),
    )?;
    Ok(())
}

pub fn run_dehaze(args: DehazeArgs) -> CliResult<()> {
    let resolved = resolve_filter(&args.opts, 20, 1e-3)?;
    let input = load(&args.input)?;
    let rgb = match input {
        LoadedImage::Rgb(rgb) => rgb,
        LoadedImage::Gray(_) => {
            return Err(CliError::param(
                "dehaze needs an RGB input (the dark channel is a color prior)",
            ))
        }
    };
    let params = DehazeParams {
        patch_radius: args.patch,
        omega: args.omega,
        t0: args.t0,
        airlight_quantile: args.airlight_quantile,
        filter: resolved.filter.clone(),
    };
    let out = dehaze(&rgb, &params)?;
    save(&args.output, &clamp_loaded(&LoadedImage::Rgb(out.recovered.clone())))?;
    if let Some(tpath) = &args.dump_transmission {
        save(tpath, &LoadedImage::Gray(out.transmission_refined.clamped01()))?;
    }
    write_sidecar(
        &args.output,
        json!({
            "command": "dehaze",
            "patch_radius": args.patch,
            "omega": args.omega,
            "t0": args.t0,
            "airlight_quantile": args.airlight_quantile,
            "airlight": out.airlight,
            "filter": filter_json(&resolved),
        }),
    )?;
    println!("dehazed -> {}", args.output.display());
    Ok(())
}

pub fn run_texture(args: TextureArgs) -> CliResult<()> {
    let resolved = resolve_filter(&args.opts, 8, 0.04)?;
    let sigma_init = args.sigma_init.unwrap_or((resolved.r as f64 / 2.0).max(0.5));
    let input = load(&args.input)?;
    let params = RgfParams {
        iterations: args.iterations,
        sigma_init,
        filter: resolved.filter.clone(),
    };
    let smoothed = map_planes(&input, |plane| Ok(rgf_texture_removal(plane, &params)?))?;
    save(&args.output, &clamp_loaded(&smoothed))?;
    write_sidecar(
        &args.output,
        json!({
            "command": "texture",
            "iterations": args.iterations,
            "sigma_init": sigma_init,
            "filter": filter_json(&resolved),
        }),
    )?;
    println!("texture-removed -> {}", args.output.display());
    Ok(())
}

//! The `filter` subcommand.

use std::time::Instant;

use ghgif::io::LoadedImage;
use ghgif::{Filter, LamVariant, PmgfVariant};

use crate::error::CliResult;
use crate::imgio::{load, resolve_filter, run_on_image, save, stem};
use crate::FilterArgs;

pub fn run(args: FilterArgs) -> CliResult<()> {
    let resolved = resolve_filter(&args.opts, 4, 0.01)?;
    let input = load(&args.input)?;
    let guide = args.guide.as_deref().map(load).transpose()?;

    let start = Instant::now();
    let output = run_on_image(&resolved.filter, &input, guide.as_ref())?;
    let elapsed = start.elapsed();

    if let Some(weights_path) = &args.dump_weights {
        dump_weight_field(&resolved.filter, &input, guide.as_ref(), weights_path)?;
    }

    save(&args.output, &output)?;
    println!(
        "filtered {}x{} ({}) with {} in {:.1} ms -> {}",
        input.width(),
        input.height(),
        stem(&args.input),
        resolved.variant,
        elapsed.as_secs_f64() * 1e3,
        args.output.display()
    );
    Ok(())
}

/// Export the variant's edge-aware weight field computed on the effective
/// guidance (rescaled PGM). Unweighted variants export nothing.
fn dump_weight_field(
    filter: &Filter,
    input: &LoadedImage,
    guide: Option<&LoadedImage>,
    path: &std::path::Path,
) -> CliResult<()> {
    let guidance = match guide {
        Some(g) => g.luminance(),
        None => input.luminance(),
    };
    let field = match filter {
        Filter::Lam(p) => match p.variant {
            LamVariant::Wgif => Some(ghgif::eaw_w1(&guidance, p.tau)?.values),
            LamVariant::Ggif => Some(ghgif::eaw_w2(&guidance, p.radius, p.tau)?.values),
            LamVariant::Rdwgif => Some(ghgif::eaw_w3(&guidance, p.mad_scale)?.values),
            _ => None,
        },
        Filter::Pmgf(p) => match p.variant {
            PmgfVariant::GhWgif => Some(ghgif::eaw_w1(&guidance, p.tau)?.values),
            PmgfVariant::GhGgif => Some(ghgif::eaw_w2(&guidance, p.radius, p.tau)?.values),
            PmgfVariant::GhRdwgif => Some(ghgif::eaw_w3(&guidance, p.mad_scale)?.values),
            _ => None,
        },
    };
    match field {
        Some(f) => Ok(ghgif::io::write_pgm_rescaled(path, &f)?),
        None => {
            eprintln!("note: variant has no edge-aware weight field; nothing dumped");
            Ok(())
        }
    }
}

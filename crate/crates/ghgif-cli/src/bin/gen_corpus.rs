//! Regenerate the shipped benchmark corpus (deterministic synthetic
//! scenes). Run from the repository root:
//!
//! ```text
//! cargo run -p ghgif-cli --bin gen-corpus [-- <output-dir>]
//! ```

use std::path::PathBuf;

use ghgif::io::write_png_gray;
use ghgif::synth;

fn main() -> std::process::ExitCode {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("assets/corpus"));
    if let Err(e) = std::fs::create_dir_all(&dir) {
        eprintln!("error: creating {}: {e}", dir.display());
        return std::process::ExitCode::from(3);
    }
    let side = 128;
    let images = [
        ("cat", synth::cat_scene(side, side, 7)),
        ("shapes", synth::gradient_shapes(side, side)),
        ("blobs", synth::gaussian_blobs(side, side)),
        ("plateaus", synth::plateau_texture(side, side, 11)),
        ("gratings", synth::grating_mix(side, side)),
        ("steptex", synth::textured_step(side, side)),
    ];
    for (name, image) in images {
        let path = dir.join(format!("{name}.png"));
        if let Err(e) = write_png_gray(&path, &image) {
            eprintln!("error: writing {}: {e}", path.display());
            return std::process::ExitCode::from(3);
        }
        println!("wrote {}", path.display());
    }
    std::process::ExitCode::SUCCESS
}

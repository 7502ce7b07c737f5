//! Benchmark records, JSON-lines reports, and the Markdown table renderer.
//!
//! Reports are reproducible: records are sorted canonically (filter order,
//! image, cell) before writing, and `wall_ms` stays `null` unless timings
//! were explicitly requested, so the same config and seed produce a
//! byte-identical file.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ghgif::Filter;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub filter: String,
    /// "lam" or "pm-gf".
    pub family: String,
    /// Source image stem, or "average" for per-cell aggregate rows.
    pub image: String,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// Denoising guidance case ("clean" or "smoothed"), absent otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guidance: Option<String>,
    /// Noise standard deviation (denoising runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
    /// Gaussian scale used to build the case-2 guidance (denoising runs
    /// only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guide_sigma: Option<f64>,
    pub psnr_db: f64,
    pub ssim: f64,
    /// Wall time; null unless the run asked for timings (timings would
    /// break byte-for-byte reproducibility of reports).
    pub wall_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn family_of(filter_name: &str) -> &'static str {
    if filter_name.starts_with("gh-") {
        "pm-gf"
    } else {
        "lam"
    }
}

fn filter_rank(name: &str) -> usize {
    Filter::all_names()
        .iter()
        .position(|&n| n == name)
        .unwrap_or(usize::MAX)
}

/// Canonical report order: filter, image, window radius, regularizer,
/// guidance case. Execution order (including parallel execution) never
/// shows in the report.
pub fn sort_canonical(records: &mut [BenchmarkRecord]) {
    records.sort_by(|a, b| {
        filter_rank(&a.filter)
            .cmp(&filter_rank(&b.filter))
            .then_with(|| a.image.cmp(&b.image))
            .then_with(|| a.r.cmp(&b.r))
            .then_with(|| {
                let ra = a.eps.or(a.lambda).unwrap_or(0.0);
                let rb = b.eps.or(b.lambda).unwrap_or(0.0);
                ra.total_cmp(&rb)
            })
            .then_with(|| {
                a.sigma
                    .unwrap_or(0.0)
                    .total_cmp(&b.sigma.unwrap_or(0.0))
            })
            .then_with(|| a.guidance.cmp(&b.guidance))
    });
}

/// Write one JSON object per line.
pub fn write_jsonl(path: &Path, records: &[BenchmarkRecord]) -> CliResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|e| CliError::io(format!("serializing record: {e}")))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Render the aggregate rows as a Markdown table laid out like the familiar
/// benchmark tables: one row per base filter, affine-family and highpass
/// columns side by side for each (r, regularizer) cell.
pub fn render_markdown(records: &[BenchmarkRecord], metric: &str) -> String {
    let averages: Vec<&BenchmarkRecord> =
        records.iter().filter(|r| r.image == "average").collect();
    // Cells are keyed by the affine-family epsilon; highpass rows carry
    // lambda = eps / 10 and fold back into the same cell.
    let mut cells: Vec<(usize, f64)> = averages
        .iter()
        .map(|r| (r.r, r.eps.unwrap_or_else(|| r.lambda.unwrap_or(0.0) * 10.0)))
        .collect();
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    cells.dedup_by(|a, b| a.0 == b.0 && (a.1 - b.1).abs() < 1e-12);
    let base_filters = ["gif", "wgif", "ggif", "skwgif", "rdwgif"];

    let mut out = String::new();
    out.push_str(&format!("| {metric} |"));
    for &(r, eps) in &cells {
        out.push_str(&format!(" r={r} eps={eps:.4} lam | gh |"));
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in &cells {
        out.push_str("---|---|");
    }
    out.push('\n');

    let value = |rec: &BenchmarkRecord| match metric {
        "ssim" => rec.ssim,
        _ => rec.psnr_db,
    };
    for base in base_filters {
        out.push_str(&format!("| {base} |"));
        for &(r, eps) in &cells {
            let lam = averages.iter().find(|rec| {
                rec.filter == base && rec.r == r && rec.eps.is_some_and(|e| (e - eps).abs() < 1e-12)
            });
            let gh_name = format!("gh-{base}");
            let gh = averages.iter().find(|rec| {
                rec.filter == gh_name
                    && rec.r == r
                    && rec.lambda.is_some_and(|l| (l - eps * 0.1).abs() < 1e-12)
            });
            match (lam, gh) {
                (Some(l), Some(g)) => {
                    out.push_str(&format!(" {:.4} | {:.4} |", value(l), value(g)))
                }
                _ => out.push_str(" - | - |"),
            }
        }
        out.push('\n');
    }
    out
}

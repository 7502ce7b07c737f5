//! Image file I/O: 8-bit grayscale and RGB PNG, binary PGM/PPM, and a
//! minimal Radiance RGBE (`.hdr`) reader for the tone-mapping pipeline.
//!
//! Loaded 8-bit samples are scaled by 1/255 into `[0, 1]`; writers clamp to
//! `[0, 1]` and quantize back. RGB images are carried as three planes so
//! every filter stays single-channel.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::ImageF;

/// A decoded image: one plane or three.
#[derive(Debug, Clone)]
pub enum LoadedImage {
    Gray(ImageF),
    Rgb([ImageF; 3]),
}

impl LoadedImage {
    pub fn width(&self) -> usize {
        match self {
            LoadedImage::Gray(g) => g.width(),
            LoadedImage::Rgb([r, _, _]) => r.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            LoadedImage::Gray(g) => g.height(),
            LoadedImage::Rgb([r, _, _]) => r.height(),
        }
    }

    /// Luminance plane: the gray plane itself, or the BT.601 weighting of
    /// the color planes.
    pub fn luminance(&self) -> ImageF {
        match self {
            LoadedImage::Gray(g) => g.clone(),
            LoadedImage::Rgb([r, g, b]) => ImageF::from_fn(r.width(), r.height(), |x, y| {
                0.299 * r.get(x, y) + 0.587 * g.get(x, y) + 0.114 * b.get(x, y)
            }),
        }
    }
}

fn ext_of(path: &Path) -> String {
    path.extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase()
}

/// Read a PNG or PNM image based on the file extension.
pub fn read_image(path: &Path) -> Result<LoadedImage> {
    match ext_of(path).as_str() {
        "png" => read_png(path),
        "pgm" | "ppm" | "pnm" => read_pnm(path),
        other => Err(Error::Format(format!(
            "unsupported input extension '{other}' (expected png, pgm or ppm)"
        ))),
    }
}

/// Write an image as PNG or PNM based on the file extension, clamping to
/// `[0, 1]` and quantizing to 8 bits.
pub fn write_image(path: &Path, image: &LoadedImage) -> Result<()> {
    match (ext_of(path).as_str(), image) {
        ("png", LoadedImage::Gray(g)) => write_png_gray(path, g),
        ("png", LoadedImage::Rgb(rgb)) => write_png_rgb(path, rgb),
        ("pgm", LoadedImage::Gray(g)) => write_pgm(path, g),
        ("pgm", LoadedImage::Rgb(_)) => Err(Error::Format(
            "pgm stores a single channel; use ppm or png for color".into(),
        )),
        ("ppm", LoadedImage::Gray(g)) => {
            let rgb = [g.clone(), g.clone(), g.clone()];
            write_ppm(path, &rgb)
        }
        ("ppm", LoadedImage::Rgb(rgb)) => write_ppm(path, rgb),
        (other, _) => Err(Error::Format(format!(
            "unsupported output extension '{other}' (expected png, pgm or ppm)"
        ))),
    }
}

fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

pub fn read_png(path: &Path) -> Result<LoadedImage> {
    let file = File::open(path)?;
    let decoder = png::Decoder::new(BufReader::new(file));
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::Format(format!("png decode: {e}")))?;
    let mut buf = vec![0u8; reader.output_buffer_size().ok_or_else(|| {
        Error::Format("png output buffer size overflow".into())
    })?];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Format(format!("png decode: {e}")))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(Error::Format(format!(
            "only 8-bit png supported, got {:?}",
            info.bit_depth
        )));
    }
    let (w, h) = (info.width as usize, info.height as usize);
    let data = &buf[..info.buffer_size()];
    let plane = |offset: usize, stride: usize| -> ImageF {
        ImageF::from_fn(w, h, |x, y| data[(y * w + x) * stride + offset] as f64 / 255.0)
    };
    match info.color_type {
        png::ColorType::Grayscale => Ok(LoadedImage::Gray(plane(0, 1))),
        png::ColorType::GrayscaleAlpha => Ok(LoadedImage::Gray(plane(0, 2))),
        png::ColorType::Rgb => Ok(LoadedImage::Rgb([plane(0, 3), plane(1, 3), plane(2, 3)])),
        png::ColorType::Rgba => Ok(LoadedImage::Rgb([plane(0, 4), plane(1, 4), plane(2, 4)])),
        other => Err(Error::Format(format!("unsupported png color type {other:?}"))),
    }
}

fn png_writer(path: &Path, w: usize, h: usize, color: png::ColorType) -> Result<png::Writer<BufWriter<File>>> {
    let file = File::create(path)?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), w as u32, h as u32);
    encoder.set_color(color);
    encoder.set_depth(png::BitDepth::Eight);
    encoder
        .write_header()
        .map_err(|e| Error::Format(format!("png encode: {e}")))
}

pub fn write_png_gray(path: &Path, image: &ImageF) -> Result<()> {
    let mut writer = png_writer(path, image.width(), image.height(), png::ColorType::Grayscale)?;
    let bytes: Vec<u8> = image.as_slice().iter().map(|&v| quantize(v)).collect();
    writer
        .write_image_data(&bytes)
        .map_err(|e| Error::Format(format!("png encode: {e}")))
}

pub fn write_png_rgb(path: &Path, rgb: &[ImageF; 3]) -> Result<()> {
    let (w, h) = (rgb[0].width(), rgb[0].height());
    let mut writer = png_writer(path, w, h, png::ColorType::Rgb)?;
    let mut bytes = Vec::with_capacity(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            for plane in rgb {
                bytes.push(quantize(plane.get(x, y)));
            }
        }
    }
    writer
        .write_image_data(&bytes)
        .map_err(|e| Error::Format(format!("png encode: {e}")))
}

// ---------------------------------------------------------------------------
// PNM (binary P5 / P6, 8-bit)
// ---------------------------------------------------------------------------

fn pnm_tokens(reader: &mut impl BufRead, count: usize) -> Result<Vec<usize>> {
    // Whitespace-separated header fields with '#' comments.
    let mut out = Vec::with_capacity(count);
    let mut token = String::new();
    let mut in_comment = false;
    let mut byte = [0u8; 1];
    while out.len() < count {
        if reader.read(&mut byte)? == 0 {
            return Err(Error::Format("truncated pnm header".into()));
        }
        let c = byte[0] as char;
        if in_comment {
            if c == '\n' {
                in_comment = false;
            }
            continue;
        }
        match c {
            '#' => in_comment = true,
            c if c.is_ascii_whitespace() => {
                if !token.is_empty() {
                    out.push(
                        token
                            .parse()
                            .map_err(|_| Error::Format(format!("bad pnm field '{token}'")))?,
                    );
                    token.clear();
                }
            }
            c => token.push(c),
        }
    }
    Ok(out)
}

pub fn read_pnm(path: &Path) -> Result<LoadedImage> {
    let file = File::open(path)?;
    let mut reader = BufReader::new(file);
    let mut magic = [0u8; 2];
    reader.read_exact(&mut magic)?;
    let channels = match &magic {
        b"P5" => 1,
        b"P6" => 3,
        other => {
            return Err(Error::Format(format!(
                "unsupported pnm magic {:?} (only binary P5/P6)",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let fields = pnm_tokens(&mut reader, 3)?;
    let (w, h, maxval) = (fields[0], fields[1], fields[2]);
    if w == 0 || h == 0 {
        return Err(Error::Format("pnm with zero dimension".into()));
    }
    if maxval != 255 {
        return Err(Error::Format(format!("only maxval 255 supported, got {maxval}")));
    }
    let mut data = vec![0u8; w * h * channels];
    reader.read_exact(&mut data)?;
    let plane = |offset: usize| ImageF::from_fn(w, h, |x, y| data[(y * w + x) * channels + offset] as f64 / 255.0);
    if channels == 1 {
        Ok(LoadedImage::Gray(plane(0)))
    } else {
        Ok(LoadedImage::Rgb([plane(0), plane(1), plane(2)]))
    }
}

pub fn write_pgm(path: &Path, image: &ImageF) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "P5\n{} {}\n255\n", image.width(), image.height())?;
    let bytes: Vec<u8> = image.as_slice().iter().map(|&v| quantize(v)).collect();
    out.write_all(&bytes)?;
    Ok(())
}

pub fn write_ppm(path: &Path, rgb: &[ImageF; 3]) -> Result<()> {
    let (w, h) = (rgb[0].width(), rgb[0].height());
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "P6\n{w} {h}\n255\n")?;
    let mut bytes = Vec::with_capacity(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            for plane in rgb {
                bytes.push(quantize(plane.get(x, y)));
            }
        }
    }
    out.write_all(&bytes)?;
    Ok(())
}

/// Export an arbitrary scalar field as an 8-bit PGM, rescaled so its min
/// maps to 0 and its max to 255 (for inspecting weight maps and other
/// diagnostics whose range is not `[0, 1]`).
pub fn write_pgm_rescaled(path: &Path, field: &ImageF) -> Result<()> {
    let (lo, hi) = (field.min_value(), field.max_value());
    let span = if hi > lo { hi - lo } else { 1.0 };
    write_pgm(path, &field.map(|v| (v - lo) / span))
}

// ---------------------------------------------------------------------------
// Radiance RGBE (.hdr), minimal subset: flat scanlines and the adaptive
// run-length encoding used by current writers.
// ---------------------------------------------------------------------------

fn rgbe_to_f64(rgbe: [u8; 4]) -> [f64; 3] {
    if rgbe[3] == 0 {
        return [0.0; 3];
    }
    let f = ((rgbe[3] as i32 - 136) as f64).exp2();
    [
        rgbe[0] as f64 * f,
        rgbe[1] as f64 * f,
        rgbe[2] as f64 * f,
    ]
}

/// Read a Radiance `.hdr` file into three linear-radiance planes.
pub fn read_hdr(path: &Path) -> Result<[ImageF; 3]> {
    let mut file = BufReader::new(File::open(path)?);
    let mut header = String::new();
    // Header: lines until the blank separator, then the resolution line.
    loop {
        let mut line = String::new();
        if file.read_line(&mut line)? == 0 {
            return Err(Error::Format("truncated hdr header".into()));
        }
        if line.trim_end().is_empty() {
            break;
        }
        header.push_str(&line);
    }
    if !header.starts_with("#?") {
        return Err(Error::Format("missing radiance signature '#?'".into()));
    }
    if let Some(fmt) = header.lines().find_map(|l| l.strip_prefix("FORMAT=")) {
        if fmt.trim() != "32-bit_rle_rgbe" {
            return Err(Error::Format(format!("unsupported hdr format '{}'", fmt.trim())));
        }
    }
    let mut resolution = String::new();
    file.read_line(&mut resolution)?;
    let parts: Vec<&str> = resolution.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "-Y" || parts[2] != "+X" {
        return Err(Error::Format(format!(
            "unsupported hdr orientation '{}' (only '-Y h +X w')",
            resolution.trim()
        )));
    }
    let h: usize = parts[1]
        .parse()
        .map_err(|_| Error::Format("bad hdr height".into()))?;
    let w: usize = parts[3]
        .parse()
        .map_err(|_| Error::Format("bad hdr width".into()))?;
    if w == 0 || h == 0 {
        return Err(Error::Format("hdr with zero dimension".into()));
    }

    let mut planes = [ImageF::zeros(w, h), ImageF::zeros(w, h), ImageF::zeros(w, h)];
    let mut scanline = vec![[0u8; 4]; w];
    for y in 0..h {
        read_hdr_scanline(&mut file, &mut scanline)?;
        for (x, rgbe) in scanline.iter().enumerate() {
            let rgb = rgbe_to_f64(*rgbe);
            for (plane, v) in planes.iter_mut().zip(rgb) {
                plane.set(x, y, v);
            }
        }
    }
    Ok(planes)
}

fn read_hdr_scanline(file: &mut impl Read, scanline: &mut [[u8; 4]]) -> Result<()> {
    let w = scanline.len();
    let mut head = [0u8; 4];
    file.read_exact(&mut head)?;
    let is_rle = head[0] == 2 && head[1] == 2 && ((head[2] as usize) << 8 | head[3] as usize) == w;
    if !is_rle {
        // Flat scanline: `head` already holds the first pixel.
        scanline[0] = head;
        for px in scanline.iter_mut().skip(1) {
            file.read_exact(px)?;
        }
        return Ok(());
    }
    // Adaptive RLE: each of the four components is run-length coded in turn.
    for comp in 0..4 {
        let mut x = 0usize;
        while x < w {
            let mut ctrl = [0u8; 1];
            file.read_exact(&mut ctrl)?;
            if ctrl[0] > 128 {
                let run = (ctrl[0] - 128) as usize;
                let mut value = [0u8; 1];
                file.read_exact(&mut value)?;
                if x + run > w {
                    return Err(Error::Format("hdr rle run overflows scanline".into()));
                }
                for px in &mut scanline[x..x + run] {
                    px[comp] = value[0];
                }
                x += run;
            } else {
                let count = ctrl[0] as usize;
                if count == 0 || x + count > w {
                    return Err(Error::Format("hdr rle literal overflows scanline".into()));
                }
                let mut literal = vec![0u8; count];
                file.read_exact(&mut literal)?;
                for (px, &v) in scanline[x..x + count].iter_mut().zip(&literal) {
                    px[comp] = v;
                }
                x += count;
            }
        }
    }
    Ok(())
}

/// Write three radiance planes as an uncompressed (flat-scanline) `.hdr`.
/// Mainly used to produce test fixtures and round-trip the reader.
pub fn write_hdr_flat(path: &Path, rgb: &[ImageF; 3]) -> Result<()> {
    let (w, h) = (rgb[0].width(), rgb[0].height());
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y {h} +X {w}\n")?;
    for y in 0..h {
        for x in 0..w {
            let (r, g, b) = (rgb[0].get(x, y), rgb[1].get(x, y), rgb[2].get(x, y));
            let max = r.max(g).max(b);
            let rgbe = if max <= 1e-32 {
                [0u8; 4]
            } else {
                // frexp: max = mantissa * 2^exp with mantissa in [0.5, 1).
                let exp = max.log2().floor() as i32 + 1;
                let scale = (-(exp as f64)).exp2() * 256.0;
                // Float-to-u8 casts saturate, bounding the mantissas.
                [
                    (r * scale) as u8,
                    (g * scale) as u8,
                    (b * scale) as u8,
                    (exp + 128) as u8,
                ]
            };
            out.write_all(&rgbe)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn temp_path(name: &str) -> PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("ghgif-io-{}-{}", std::process::id(), name));
        p
    }

    fn gradient(w: usize, h: usize) -> ImageF {
        ImageF::from_fn(w, h, |x, y| ((x * 31 + y * 17) % 256) as f64 / 255.0)
    }

    #[test]
    fn png_gray_roundtrip_is_exact_at_8bit() {
        let img = gradient(23, 17);
        let path = temp_path("gray.png");
        write_png_gray(&path, &img).unwrap();
        match read_png(&path).unwrap() {
            LoadedImage::Gray(back) => assert!(back.max_abs_diff(&img) < 1e-12),
            _ => panic!("expected gray"),
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn png_rgb_roundtrip() {
        let rgb = [gradient(9, 9), gradient(9, 9).map(|v| 1.0 - v), gradient(9, 9).scale(0.5)];
        let path = temp_path("color.png");
        write_png_rgb(&path, &rgb).unwrap();
        match read_png(&path).unwrap() {
            LoadedImage::Rgb(back) => {
                for (a, b) in back.iter().zip(&rgb) {
                    // 0.5-scaled plane re-quantizes within half a step.
                    assert!(a.max_abs_diff(b) <= 0.5 / 255.0 + 1e-12);
                }
            }
            _ => panic!("expected rgb"),
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn pnm_roundtrip() {
        let img = gradient(13, 7);
        let path = temp_path("img.pgm");
        write_pgm(&path, &img).unwrap();
        match read_pnm(&path).unwrap() {
            LoadedImage::Gray(back) => assert!(back.max_abs_diff(&img) < 1e-12),
            _ => panic!("expected gray"),
        }
        std::fs::remove_file(&path).ok();

        let rgb = [gradient(5, 6), gradient(5, 6), gradient(5, 6)];
        let path = temp_path("img.ppm");
        write_ppm(&path, &rgb).unwrap();
        match read_pnm(&path).unwrap() {
            LoadedImage::Rgb(back) => assert!(back[1].max_abs_diff(&rgb[1]) < 1e-12),
            _ => panic!("expected rgb"),
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn hdr_flat_roundtrip_preserves_dynamic_range() {
        // Channels share one exponent per pixel, so keep their ratio well
        // inside the 8-bit mantissa range.
        let r = ImageF::from_fn(8, 4, |x, y| 0.001 + (x as f64 + 1.0) * (y as f64 + 1.0));
        let rgb = [r.clone(), r.scale(2.0), r.scale(4.0)];
        let path = temp_path("img.hdr");
        write_hdr_flat(&path, &rgb).unwrap();
        let back = read_hdr(&path).unwrap();
        for (a, b) in back.iter().zip(&rgb) {
            for (&av, &bv) in a.as_slice().iter().zip(b.as_slice()) {
                // Truncated 8-bit mantissa: worst case ~2% at these ratios.
                assert!((av - bv).abs() <= bv.abs() * 0.02 + 1e-6, "{av} vs {bv}");
            }
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn rejects_unknown_extension() {
        assert!(read_image(Path::new("whatever.tiff")).is_err());
    }
}

//! Application pipelines built on the filter engines: detail enhancement,
//! HDR tone mapping, single-image dehazing, and rolling-guidance texture
//! removal.

mod dehaze;
mod enhance;
mod rgf;
mod tonemap;

pub use dehaze::{dehaze, DehazeOutput, DehazeParams};
pub use enhance::{detail_enhance, EnhanceParams};
pub use rgf::{rgf_texture_removal, RgfParams};
pub use tonemap::{tone_map_gray, tone_map_rgb, ToneMapParams};

use crate::image::ImageF;

/// BT.601 luminance of three planes.
pub fn luminance(rgb: &[ImageF; 3]) -> ImageF {
    ImageF::from_fn(rgb[0].width(), rgb[0].height(), |x, y| {
        0.299 * rgb[0].get(x, y) + 0.587 * rgb[1].get(x, y) + 0.114 * rgb[2].get(x, y)
    })
}

//! Rasterization of label grids to RGBA PNG images.

use crate::cells::{color_of, LabelGrid, Rgba};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Output pixels per grid sample along each axis (nearest neighbour).
    pub scale: u32,
    /// Mark the transmitter position with a small cross.
    pub overlay_tx: bool,
    /// Color used where the cell color is fully transparent.
    pub background: Rgba,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { scale: 1, overlay_tx: false, background: Rgba::TRANSPARENT }
    }
}

const TX_MARK: Rgba = Rgba([255, 255, 255, 255]);

/// RGBA pixels of the map, row 0 at the maximum y.
pub fn render_pixels(grid: &LabelGrid, options: &RenderOptions) -> Result<(u32, u32, Vec<u8>)> {
    if options.scale == 0 {
        return Err(Error::InvalidParameter("render scale must be at least 1".into()));
    }
    let s = options.scale as usize;
    let (w, h) = (grid.nx * s, grid.ny * s);
    let (Ok(w32), Ok(h32)) = (u32::try_from(w), u32::try_from(h)) else {
        return Err(Error::InvalidParameter(format!("image of {w}x{h} pixels is too large")));
    };
    let mut pixels = vec![0u8; w * h * 4];
    for (r, row) in pixels.chunks_exact_mut(w * 4).enumerate() {
        let j = grid.ny - 1 - r / s;
        for i in 0..grid.nx {
            let mut c = color_of(&grid.get(i, j));
            if c.alpha() == 0 {
                c = options.background;
            }
            for k in 0..s {
                let x = (i * s + k) * 4;
                row[x..x + 4].copy_from_slice(&c.0);
            }
        }
    }

    if options.overlay_tx {
        let fi = ((grid.tx.x - grid.origin.x) / grid.pitch_x).round();
        let fj = ((grid.tx.y - grid.origin.y) / grid.pitch_y).round();
        let (fw, fh) = (w as f64, h as f64);
        let cx = fi * s as f64 + (s as f64 - 1.0) / 2.0;
        let cy = (grid.ny as f64 - 1.0 - fj) * s as f64 + (s as f64 - 1.0) / 2.0;
        let arm = (2 * s).max(2) as i64;
        for d in -arm..=arm {
            for (x, y) in [(cx + d as f64, cy), (cx, cy + d as f64)] {
                if x >= 0.0 && y >= 0.0 && x < fw && y < fh {
                    let p = (y as usize * w + x as usize) * 4;
                    pixels[p..p + 4].copy_from_slice(&TX_MARK.0);
                }
            }
        }
    }
    Ok((w32, h32, pixels))
}

/// Encodes the map as an 8-bit RGBA PNG.
pub fn render_mlm(grid: &LabelGrid, options: &RenderOptions) -> Result<Vec<u8>> {
    let (w, h, pixels) = render_pixels(grid, options)?;
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, w, h);
        encoder.set_color(png::ColorType::Rgba);
        encoder.set_depth(png::BitDepth::Eight);
        encoder.set_compression(png::Compression::Default);
        let mut writer = encoder.write_header()?;
        writer.write_image_data(&pixels)?;
        writer.finish()?;
    }
    Ok(out)
}

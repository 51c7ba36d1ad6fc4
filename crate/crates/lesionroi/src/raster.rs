//! Crop, quarter-turn, and bilinear resize for RGB rasters.
//!
//! These mirror the mask operations in [`crate::mask`] pixel for pixel:
//! crops use the same half-open windows, rotations apply the same index
//! permutation, and the resize kernel uses the same half-pixel center
//! alignment as the mask's nearest-neighbor path. Keeping both sides of an
//! image/mask pair on identical index math is what makes augmented pairs
//! stay aligned.

use image::RgbImage;

use crate::error::{Error, Result};
use crate::geometry::{BBox, QuarterTurn};

/// Sub-image covered by `window`, which must lie inside the frame.
pub fn crop_rgb(image: &RgbImage, window: &BBox) -> Result<RgbImage> {
    if !window.fits_in(image.width(), image.height()) {
        return Err(Error::OutOfFrame {
            x_min: window.x_min(),
            y_min: window.y_min(),
            x_max: window.x_max(),
            y_max: window.y_max(),
            width: image.width(),
            height: image.height(),
        });
    }
    let (cw, ch) = (window.width() as u32, window.height() as u32);
    let mut out = RgbImage::new(cw, ch);
    for y in 0..ch {
        for x in 0..cw {
            let src = image.get_pixel(window.x_min() as u32 + x, window.y_min() as u32 + y);
            out.put_pixel(x, y, *src);
        }
    }
    Ok(out)
}

/// Image after a clockwise quarter turn; a pure pixel permutation using the
/// same mapping as [`crate::mask::BinaryMask::rotated`].
pub fn rotate_rgb(image: &RgbImage, turn: QuarterTurn) -> RgbImage {
    let (w, h) = (image.width(), image.height());
    let (nw, nh) = turn.frame_after(w, h);
    let mut out = RgbImage::new(nw, nh);
    for y in 0..h {
        for x in 0..w {
            let (nx, ny) = match turn {
                QuarterTurn::R0 => (x, y),
                QuarterTurn::R90 => (h - 1 - y, x),
                QuarterTurn::R180 => (w - 1 - x, h - 1 - y),
                QuarterTurn::R270 => (y, w - 1 - x),
            };
            out.put_pixel(nx, ny, *image.get_pixel(x, y));
        }
    }
    out
}

/// Interpolation weights along one axis: for each target index, the two
/// source indices to blend and the fraction of the second one. Source
/// coordinates come from aligning pixel centers, `(j + 0.5) * src / dst -
/// 0.5`, and out-of-range neighbors are clamped so edges replicate.
fn lerp_coords(src: u32, dst: u32) -> Vec<(usize, usize, f64)> {
    let scale = f64::from(src) / f64::from(dst);
    (0..dst)
        .map(|j| {
            let pos = (f64::from(j) + 0.5) * scale - 0.5;
            let base = pos.floor();
            let frac = pos - base;
            let lo = (base.max(0.0) as usize).min(src as usize - 1);
            let hi = (lo + 1).min(src as usize - 1);
            // A negative base means both taps clamp to column 0.
            if base < 0.0 {
                (0, 0, 0.0)
            } else {
                (lo, hi, frac)
            }
        })
        .collect()
}

/// Separable bilinear resize with half-pixel center alignment.
///
/// Runs a horizontal pass then a vertical pass over f64 accumulators and
/// rounds once at the end, so results are deterministic across platforms
/// and an identity resize returns the input bit for bit. Not aspect
/// preserving: both axes scale independently.
pub fn resize_bilinear(image: &RgbImage, new_width: u32, new_height: u32) -> Result<RgbImage> {
    if new_width == 0 || new_height == 0 {
        return Err(Error::InvalidParams(format!(
            "resize target must be nonzero, got {new_width}x{new_height}"
        )));
    }
    if new_width == image.width() && new_height == image.height() {
        return Ok(image.clone());
    }
    let (w, h) = (image.width() as usize, image.height() as usize);
    let xs = lerp_coords(image.width(), new_width);
    let ys = lerp_coords(image.height(), new_height);
    let raw = image.as_raw();

    // Horizontal pass: h rows of new_width interpolated columns.
    let mut mid = vec![0.0f64; h * new_width as usize * 3];
    for y in 0..h {
        let row = y * w * 3;
        for (j, &(lo, hi, frac)) in xs.iter().enumerate() {
            let out = (y * new_width as usize + j) * 3;
            for c in 0..3 {
                let a = f64::from(raw[row + lo * 3 + c]);
                let b = f64::from(raw[row + hi * 3 + c]);
                mid[out + c] = a + (b - a) * frac;
            }
        }
    }

    // Vertical pass straight into the output raster.
    let mut out = RgbImage::new(new_width, new_height);
    let out_raw = out.as_mut();
    for (i, &(lo, hi, frac)) in ys.iter().enumerate() {
        for j in 0..new_width as usize {
            let top = (lo * new_width as usize + j) * 3;
            let bot = (hi * new_width as usize + j) * 3;
            let dst = (i * new_width as usize + j) * 3;
            for c in 0..3 {
                let v = mid[top + c] + (mid[bot + c] - mid[top + c]) * frac;
                out_raw[dst + c] = v.round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    Ok(out)
}

//! Binary segmentation masks and the raster operations the toolkit applies
//! to them: tight bounding boxes, quarter-turn rotation, cropping,
//! nearest-neighbor resizing, and connected-component filtering.
//!
//! Masks are row-major with the same orientation as [`crate::geometry`]:
//! pixel `(x, y)` sits at column x of row y, and `(0, 0)` is top-left.

use crate::error::{Error, Result};
use crate::geometry::{BBox, QuarterTurn};

/// Grayscale level at and above which a pixel counts as foreground when a
/// mask is read from an 8-bit raster.
pub const FOREGROUND_THRESHOLD: u8 = 128;

/// Row-major binary raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    data: Vec<bool>,
}

impl BinaryMask {
    /// Builds a mask from raw row-major data; `data.len()` must equal
    /// `width * height` and both dimensions must be nonzero.
    pub fn new(width: u32, height: u32, data: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParams(format!(
                "mask dimensions must be nonzero, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if data.len() != expected {
            return Err(Error::InvalidParams(format!(
                "mask data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(BinaryMask {
            width,
            height,
            data,
        })
    }

    /// All-background or all-foreground mask.
    pub fn filled(width: u32, height: u32, value: bool) -> Result<Self> {
        let len = width as usize * height as usize;
        BinaryMask::new(width, height, vec![value; len])
    }

    /// Binarizes an 8-bit grayscale raster: values at or above
    /// [`FOREGROUND_THRESHOLD`] become foreground.
    pub fn from_gray8(pixels: &[u8], width: u32, height: u32) -> Result<Self> {
        let data = pixels.iter().map(|&p| p >= FOREGROUND_THRESHOLD).collect();
        BinaryMask::new(width, height, data)
    }

    /// 8-bit rendering with foreground as 255 and background as 0.
    pub fn to_gray8(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|&b| if b { 255 } else { 0 })
            .collect()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.data[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        self.data[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Smallest box containing every foreground pixel, regardless of how
    /// many disconnected blobs the mask holds. Errors when the mask is all
    /// background.
    pub fn circumscribe(&self) -> Result<BBox> {
        let mut x_min = i64::MAX;
        let mut y_min = i64::MAX;
        let mut x_max = i64::MIN;
        let mut y_max = i64::MIN;
        for y in 0..self.height {
            let row = y as usize * self.width as usize;
            for x in 0..self.width {
                if self.data[row + x as usize] {
                    x_min = x_min.min(i64::from(x));
                    y_min = y_min.min(i64::from(y));
                    x_max = x_max.max(i64::from(x));
                    y_max = y_max.max(i64::from(y));
                }
            }
        }
        if x_min == i64::MAX {
            return Err(Error::NoForeground);
        }
        BBox::new(x_min, y_min, x_max + 1, y_max + 1)
    }

    /// Mask after rotating the frame clockwise by a quarter turn. The pixel
    /// permutation matches [`BBox::rotated`]: a 90 degree turn sends
    /// `(x, y)` to `(height - 1 - y, x)`.
    pub fn rotated(&self, turn: QuarterTurn) -> BinaryMask {
        let (w, h) = (self.width as usize, self.height as usize);
        let (nw, nh) = turn.frame_after(self.width, self.height);
        let mut data = vec![false; w * h];
        for y in 0..h {
            for x in 0..w {
                if !self.data[y * w + x] {
                    continue;
                }
                let (nx, ny) = match turn {
                    QuarterTurn::R0 => (x, y),
                    QuarterTurn::R90 => (h - 1 - y, x),
                    QuarterTurn::R180 => (w - 1 - x, h - 1 - y),
                    QuarterTurn::R270 => (y, w - 1 - x),
                };
                data[ny * nw as usize + nx] = true;
            }
        }
        BinaryMask {
            width: nw,
            height: nh,
            data,
        }
    }

    /// Sub-mask covered by `window`, which must lie inside the frame.
    pub fn cropped(&self, window: &BBox) -> Result<BinaryMask> {
        if !window.fits_in(self.width, self.height) {
            return Err(Error::OutOfFrame {
                x_min: window.x_min(),
                y_min: window.y_min(),
                x_max: window.x_max(),
                y_max: window.y_max(),
                width: self.width,
                height: self.height,
            });
        }
        let (cw, ch) = (window.width() as usize, window.height() as usize);
        let mut data = Vec::with_capacity(cw * ch);
        for y in 0..ch {
            let src_y = (window.y_min() as usize + y) * self.width as usize;
            let start = src_y + window.x_min() as usize;
            data.extend_from_slice(&self.data[start..start + cw]);
        }
        Ok(BinaryMask {
            width: cw as u32,
            height: ch as u32,
            data,
        })
    }

    /// Nearest-neighbor resize: each target pixel center is mapped through
    /// the scale factors and takes the source pixel it lands in. Output is
    /// strictly binary by construction and the identity resize returns the
    /// mask unchanged.
    pub fn resized(&self, new_width: u32, new_height: u32) -> Result<BinaryMask> {
        if new_width == 0 || new_height == 0 {
            return Err(Error::InvalidParams(format!(
                "resize target must be nonzero, got {new_width}x{new_height}"
            )));
        }
        let src_x = nearest_indices(self.width, new_width);
        let src_y = nearest_indices(self.height, new_height);
        let mut data = Vec::with_capacity(new_width as usize * new_height as usize);
        for &sy in &src_y {
            let row = sy * self.width as usize;
            for &sx in &src_x {
                data.push(self.data[row + sx]);
            }
        }
        Ok(BinaryMask {
            width: new_width,
            height: new_height,
            data,
        })
    }

    /// Keeps only the largest 4-connected foreground component; ties go to
    /// the component whose first pixel comes earliest in row-major order.
    /// Errors when the mask has no foreground at all.
    pub fn largest_component(&self) -> Result<BinaryMask> {
        let (w, h) = (self.width as usize, self.height as usize);
        let mut label = vec![0u32; w * h];
        let mut sizes = vec![0usize]; // sizes[0] unused: 0 means unlabeled
        let mut queue = Vec::new();
        for start in 0..w * h {
            if !self.data[start] || label[start] != 0 {
                continue;
            }
            let id = sizes.len() as u32;
            sizes.push(0);
            queue.push(start);
            label[start] = id;
            while let Some(idx) = queue.pop() {
                sizes[id as usize] += 1;
                let (x, y) = (idx % w, idx / w);
                let mut visit = |nx: usize, ny: usize| {
                    let n = ny * w + nx;
                    if self.data[n] && label[n] == 0 {
                        label[n] = id;
                        queue.push(n);
                    }
                };
                if x > 0 {
                    visit(x - 1, y);
                }
                if x + 1 < w {
                    visit(x + 1, y);
                }
                if y > 0 {
                    visit(x, y - 1);
                }
                if y + 1 < h {
                    visit(x, y + 1);
                }
            }
        }
        if sizes.len() == 1 {
            return Err(Error::NoForeground);
        }
        // max_by_key keeps the last maximum, so scan in reverse to make the
        // earliest component win ties.
        let keep = (1..sizes.len())
            .rev()
            .max_by_key(|&id| sizes[id])
            .unwrap() as u32;
        let data = label.iter().map(|&l| l == keep).collect();
        Ok(BinaryMask {
            width: self.width,
            height: self.height,
            data,
        })
    }
}

/// Source index for each target pixel under nearest-neighbor scaling:
/// `floor((j + 0.5) * src / dst)`, clamped to the valid range.
fn nearest_indices(src: u32, dst: u32) -> Vec<usize> {
    let scale = f64::from(src) / f64::from(dst);
    (0..dst)
        .map(|j| {
            let pos = (f64::from(j) + 0.5) * scale;
            (pos.floor() as usize).min(src as usize - 1)
        })
        .collect()
}

//! Axis-aligned box arithmetic on the integer pixel grid.
//!
//! Boxes are half-open: a box covers the pixel columns `x_min..x_max` and
//! rows `y_min..y_max`, with the origin at the top-left corner, x growing
//! rightward and y growing downward. Width, height, area, and overlap are
//! therefore exact integer counts, and IoU is a single floating-point
//! division performed at the very end.

use crate::error::{Error, Result};

/// Axis-aligned box in half-open pixel coordinates.
///
/// The derived `Ord` compares `(x_min, y_min, x_max, y_max)`
/// lexicographically, which is also the deterministic tie-break order used
/// when ranking detections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BBox {
    x_min: i64,
    y_min: i64,
    x_max: i64,
    y_max: i64,
}

impl BBox {
    /// Builds a box, rejecting coordinates that violate `0 <= min < max`.
    pub fn new(x_min: i64, y_min: i64, x_max: i64, y_max: i64) -> Result<Self> {
        if x_min < 0 || y_min < 0 || x_max <= x_min || y_max <= y_min {
            return Err(Error::InvalidBox {
                x_min,
                y_min,
                x_max,
                y_max,
            });
        }
        Ok(BBox {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn y_min(&self) -> i64 {
        self.y_min
    }

    pub fn x_max(&self) -> i64 {
        self.x_max
    }

    pub fn y_max(&self) -> i64 {
        self.y_max
    }

    pub fn width(&self) -> i64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> i64 {
        self.y_max - self.y_min
    }

    /// Number of pixels covered; always positive.
    pub fn area(&self) -> i64 {
        self.width() * self.height()
    }

    /// Center rounded down to the pixel grid.
    pub fn center(&self) -> (i64, i64) {
        (
            (self.x_min + self.x_max).div_euclid(2),
            (self.y_min + self.y_max).div_euclid(2),
        )
    }

    /// Coordinate tuple in lexicographic tie-break order.
    pub fn as_tuple(&self) -> (i64, i64, i64, i64) {
        (self.x_min, self.y_min, self.x_max, self.y_max)
    }

    /// True when the pixel at `(x, y)` lies inside the box.
    pub fn contains_pixel(&self, x: i64, y: i64) -> bool {
        x >= self.x_min && x < self.x_max && y >= self.y_min && y < self.y_max
    }

    /// True when `other` lies entirely inside `self`.
    pub fn contains(&self, other: &BBox) -> bool {
        self.x_min <= other.x_min
            && self.y_min <= other.y_min
            && self.x_max >= other.x_max
            && self.y_max >= other.y_max
    }

    /// True when the box lies inside a `width` x `height` frame.
    pub fn fits_in(&self, width: u32, height: u32) -> bool {
        self.x_max <= i64::from(width) && self.y_max <= i64::from(height)
    }

    /// Overlap box, or `None` when the boxes share no pixel.
    ///
    /// Boxes that merely touch along an edge do not overlap: every pixel
    /// belongs to at most one side of the shared edge.
    pub fn intersect(&self, other: &BBox) -> Option<BBox> {
        let x_min = self.x_min.max(other.x_min);
        let y_min = self.y_min.max(other.y_min);
        let x_max = self.x_max.min(other.x_max);
        let y_max = self.y_max.min(other.y_max);
        if x_max > x_min && y_max > y_min {
            Some(BBox {
                x_min,
                y_min,
                x_max,
                y_max,
            })
        } else {
            None
        }
    }

    /// Intersection-over-union in exact integer arithmetic.
    ///
    /// Intersection and union areas are integers; the only rounding is the
    /// final division. Valid boxes have positive area, so the union is
    /// never zero.
    pub fn iou(&self, other: &BBox) -> f64 {
        let inter = self.intersect(other).map_or(0, |b| b.area());
        let union = self.area() + other.area() - inter;
        inter as f64 / union as f64
    }

    /// Box after rotating the whole frame by a quarter turn clockwise.
    ///
    /// The frame is `width` x `height` and must contain the box. A 90 or
    /// 270 degree turn swaps the frame dimensions, so the result is
    /// expressed in the rotated frame's coordinates.
    pub fn rotated(&self, turn: QuarterTurn, width: u32, height: u32) -> Result<BBox> {
        if !self.fits_in(width, height) {
            return Err(Error::OutOfFrame {
                x_min: self.x_min,
                y_min: self.y_min,
                x_max: self.x_max,
                y_max: self.y_max,
                width,
                height,
            });
        }
        let w = i64::from(width);
        let h = i64::from(height);
        // A clockwise quarter turn maps pixel (x, y) to (h - 1 - y, x);
        // applying that to the half-open ranges gives the forms below.
        let b = match turn {
            QuarterTurn::R0 => *self,
            QuarterTurn::R90 => BBox {
                x_min: h - self.y_max,
                y_min: self.x_min,
                x_max: h - self.y_min,
                y_max: self.x_max,
            },
            QuarterTurn::R180 => BBox {
                x_min: w - self.x_max,
                y_min: h - self.y_max,
                x_max: w - self.x_min,
                y_max: h - self.y_min,
            },
            QuarterTurn::R270 => BBox {
                x_min: self.y_min,
                y_min: w - self.x_max,
                x_max: self.y_max,
                y_max: w - self.x_min,
            },
        };
        Ok(b)
    }
}

/// Clockwise quarter-turn rotations, the only rotations this toolkit
/// applies because they permute pixels without resampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuarterTurn {
    R0,
    R90,
    R180,
    R270,
}

impl QuarterTurn {
    /// All four turns in ascending angle order.
    pub const ALL: [QuarterTurn; 4] = [
        QuarterTurn::R0,
        QuarterTurn::R90,
        QuarterTurn::R180,
        QuarterTurn::R270,
    ];

    pub fn degrees(self) -> u32 {
        match self {
            QuarterTurn::R0 => 0,
            QuarterTurn::R90 => 90,
            QuarterTurn::R180 => 180,
            QuarterTurn::R270 => 270,
        }
    }

    pub fn from_degrees(degrees: u32) -> Result<Self> {
        match degrees {
            0 => Ok(QuarterTurn::R0),
            90 => Ok(QuarterTurn::R90),
            180 => Ok(QuarterTurn::R180),
            270 => Ok(QuarterTurn::R270),
            other => Err(Error::InvalidParams(format!(
                "rotation must be one of 0, 90, 180, 270 degrees, got {other}"
            ))),
        }
    }

    /// True for the turns that swap frame width and height.
    pub fn swaps_axes(self) -> bool {
        matches!(self, QuarterTurn::R90 | QuarterTurn::R270)
    }

    /// Frame dimensions after the turn.
    pub fn frame_after(self, width: u32, height: u32) -> (u32, u32) {
        if self.swaps_axes() {
            (height, width)
        } else {
            (width, height)
        }
    }
}

/// Square `side` x `side` window centered as close to `(cx, cy)` as the
/// frame allows.
///
/// The window is translated, never shrunk: the nominal minimum corner
/// `floor((2c - side) / 2)` is clamped into `[0, dim - side]` per axis.
/// Centers with no room on one side therefore produce a window flush with
/// the frame edge. Errors when `side` is zero or exceeds either frame
/// dimension.
pub fn clamp_window(cx: i64, cy: i64, side: u32, width: u32, height: u32) -> Result<BBox> {
    if side == 0 || side > width || side > height {
        return Err(Error::WindowTooLarge {
            side,
            width,
            height,
        });
    }
    let s = i64::from(side);
    let x_min = (2 * cx - s).div_euclid(2).clamp(0, i64::from(width) - s);
    let y_min = (2 * cy - s).div_euclid(2).clamp(0, i64::from(height) - s);
    Ok(BBox {
        x_min,
        y_min,
        x_max: x_min + s,
        y_max: y_min + s,
    })
}

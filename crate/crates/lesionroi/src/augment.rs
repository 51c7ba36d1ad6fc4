//! ROI-centered augmentation: square crop windows at a ladder of
//! magnification levels, each combined with every configured quarter turn,
//! applied in lockstep to an image and its mask.
//!
//! All windows share the ROI center and every level contains the level
//! below it, so the ladder walks from a tight view of the lesion out to the
//! largest square the frame allows. Crops are taken from the source frame
//! and only ever scaled down to the output side, never up, which keeps the
//! outputs photographic instead of interpolated.

use image::RgbImage;

use crate::error::{Error, Result};
use crate::geometry::{clamp_window, BBox, QuarterTurn};
use crate::mask::BinaryMask;
use crate::raster::{crop_rgb, resize_bilinear, rotate_rgb};

/// Knobs for [`plan`] and [`apply_plan`].
#[derive(Clone, Debug)]
pub struct AugmentParams {
    /// Side of every output image in pixels.
    pub target_side: u32,
    /// Fractional padding around the ROI's longer side at the tightest
    /// level, so the lesion never touches the crop border.
    pub margin: f64,
    /// Multiplicative spacing between consecutive ladder levels.
    pub step: f64,
    /// A final full-frame level is appended only when it exceeds the last
    /// ladder level by more than this fraction.
    pub terminal_slack: f64,
    /// Quarter turns applied to every window. Order and duplicates are
    /// ignored; the plan always emits turns in ascending angle order.
    pub rotations: Vec<QuarterTurn>,
}

impl Default for AugmentParams {
    fn default() -> Self {
        AugmentParams {
            target_side: 224,
            margin: 0.10,
            step: 1.5,
            terminal_slack: 0.10,
            rotations: QuarterTurn::ALL.to_vec(),
        }
    }
}

impl AugmentParams {
    pub fn validate(&self) -> Result<()> {
        if self.target_side == 0 {
            return Err(Error::InvalidParams("target side must be nonzero".into()));
        }
        if !self.margin.is_finite() || self.margin < 0.0 {
            return Err(Error::InvalidParams(format!(
                "margin must be a nonnegative finite number, got {}",
                self.margin
            )));
        }
        if !self.step.is_finite() || self.step <= 1.0 {
            return Err(Error::InvalidParams(format!(
                "step must be greater than 1, got {}",
                self.step
            )));
        }
        if !self.terminal_slack.is_finite() || self.terminal_slack < 0.0 {
            return Err(Error::InvalidParams(format!(
                "terminal slack must be a nonnegative finite number, got {}",
                self.terminal_slack
            )));
        }
        if self.rotations.is_empty() {
            return Err(Error::InvalidParams(
                "at least one rotation is required".into(),
            ));
        }
        Ok(())
    }

    /// Rotations deduplicated and in ascending angle order.
    fn normalized_rotations(&self) -> Vec<QuarterTurn> {
        let mut turns = self.rotations.clone();
        turns.sort();
        turns.dedup();
        turns
    }
}

/// One output to cut: a source window and the turn to apply to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanRecord {
    pub window: BBox,
    pub turn: QuarterTurn,
    /// Stable output name, `{image_id}_m{level}_r{degrees}`.
    pub out_id: String,
}

/// Full set of crops for one source image.
#[derive(Clone, Debug)]
pub struct AugmentationPlan {
    pub image_id: String,
    pub source_width: u32,
    pub source_height: u32,
    /// Window side per magnification level, strictly increasing.
    pub ladder: Vec<u32>,
    /// Records ordered by ascending level, then ascending rotation angle.
    pub records: Vec<PlanRecord>,
}

/// Window sides for the magnification ladder.
///
/// The tightest level wraps the ROI's longer side in the configured margin
/// but never drops below `target_side`; each following level multiplies by
/// `step` (rounded) while it fits inside the frame, and a final level of
/// `min(width, height)` is appended when the frame exceeds the last level
/// by more than `terminal_slack`. Degenerate inputs (an ROI spanning the
/// frame) collapse to the single full-frame level.
pub fn magnification_ladder(
    width: u32,
    height: u32,
    roi: &BBox,
    params: &AugmentParams,
) -> Result<Vec<u32>> {
    params.validate()?;
    if !roi.fits_in(width, height) {
        return Err(Error::OutOfFrame {
            x_min: roi.x_min(),
            y_min: roi.y_min(),
            x_max: roi.x_max(),
            y_max: roi.y_max(),
            width,
            height,
        });
    }
    let min_dim = width.min(height);
    let roi_side = roi.width().max(roi.height()) as f64;
    let padded = (roi_side * (1.0 + params.margin)).ceil() as u32;
    let base = padded.max(params.target_side).min(min_dim);

    let mut ladder = vec![base];
    for k in 1.. {
        let side = (f64::from(base) * params.step.powi(k)).round() as u32;
        if side > min_dim {
            break;
        }
        // Tiny bases with a step close to 1 can round to the same side;
        // skip those so the ladder stays strictly increasing.
        if side > *ladder.last().unwrap() {
            ladder.push(side);
        }
    }
    let last = *ladder.last().unwrap();
    if f64::from(min_dim) > f64::from(last) * (1.0 + params.terminal_slack) {
        ladder.push(min_dim);
    }
    Ok(ladder)
}

/// Builds the crop-and-turn schedule for one image.
///
/// Every record's window is square, lies inside the frame, has side at
/// least `target_side`, and contains the level-0 window. The frame must be
/// at least `target_side` on both axes; smaller frames would force
/// upsampling and are rejected.
pub fn plan(
    image_id: &str,
    width: u32,
    height: u32,
    roi: &BBox,
    params: &AugmentParams,
) -> Result<AugmentationPlan> {
    params.validate()?;
    if width.min(height) < params.target_side {
        return Err(Error::FrameTooSmall {
            width,
            height,
            target_side: params.target_side,
        });
    }
    let ladder = magnification_ladder(width, height, roi, params)?;
    let turns = params.normalized_rotations();
    let (cx, cy) = roi.center();

    let mut records = Vec::with_capacity(ladder.len() * turns.len());
    for (level, &side) in ladder.iter().enumerate() {
        let window = clamp_window(cx, cy, side, width, height)?;
        for &turn in &turns {
            records.push(PlanRecord {
                window,
                turn,
                out_id: format!("{image_id}_m{level}_r{}", turn.degrees()),
            });
        }
    }
    Ok(AugmentationPlan {
        image_id: image_id.to_string(),
        source_width: width,
        source_height: height,
        ladder,
        records,
    })
}

/// One augmented output: the cropped, turned, rescaled image with its mask
/// transformed by the identical window and turn.
#[derive(Clone, Debug)]
pub struct AugmentedSample {
    pub image: RgbImage,
    pub mask: Option<BinaryMask>,
    pub record: PlanRecord,
}

/// Executes a plan against the source image and optional mask.
///
/// Each record crops its window, applies the quarter turn, and resizes to
/// `target_side` square: bilinear for the image, nearest-neighbor for the
/// mask. Windows are never smaller than the target side, so the scale
/// factor is always at most 1. Dimensions of both rasters must match the
/// plan's source frame.
pub fn apply_plan(
    image: &RgbImage,
    mask: Option<&BinaryMask>,
    plan: &AugmentationPlan,
    params: &AugmentParams,
) -> Result<Vec<AugmentedSample>> {
    params.validate()?;
    if (image.width(), image.height()) != (plan.source_width, plan.source_height) {
        return Err(Error::DimensionMismatch {
            expected: (plan.source_width, plan.source_height),
            actual: (image.width(), image.height()),
        });
    }
    if let Some(m) = mask {
        if (m.width(), m.height()) != (plan.source_width, plan.source_height) {
            return Err(Error::DimensionMismatch {
                expected: (plan.source_width, plan.source_height),
                actual: (m.width(), m.height()),
            });
        }
    }

    let side = params.target_side;
    plan.records
        .iter()
        .map(|record| {
            let cropped = crop_rgb(image, &record.window)?;
            let turned = rotate_rgb(&cropped, record.turn);
            let image_out = resize_bilinear(&turned, side, side)?;
            let mask_out = match mask {
                Some(m) => Some(
                    m.cropped(&record.window)?
                        .rotated(record.turn)
                        .resized(side, side)?,
                ),
                None => None,
            };
            Ok(AugmentedSample {
                image: image_out,
                mask: mask_out,
                record: record.clone(),
            })
        })
        .collect()
}

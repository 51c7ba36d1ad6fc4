//! Confusion-count metrics for segmentation masks and binary
//! classification: accuracy, Dice, Jaccard, sensitivity, specificity,
//! precision, F1, and Matthews correlation.
//!
//! Ratios with a `0 / 0` shape are reported as 1 and flagged rather than
//! returned as NaN, so aggregated tables stay numeric. The one exception is
//! MCC, which is defined as 0 whenever a denominator factor vanishes.

use std::ops::Add;

use crate::error::{Error, Result};
use crate::mask::BinaryMask;

/// Binary confusion table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
    pub true_neg: u64,
}

impl ConfusionCounts {
    pub fn new(true_pos: u64, false_pos: u64, false_neg: u64, true_neg: u64) -> Self {
        ConfusionCounts {
            true_pos,
            false_pos,
            false_neg,
            true_neg,
        }
    }

    pub fn total(&self) -> u64 {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }
}

impl Add for ConfusionCounts {
    type Output = ConfusionCounts;

    fn add(self, rhs: ConfusionCounts) -> ConfusionCounts {
        ConfusionCounts {
            true_pos: self.true_pos + rhs.true_pos,
            false_pos: self.false_pos + rhs.false_pos,
            false_neg: self.false_neg + rhs.false_neg,
            true_neg: self.true_neg + rhs.true_neg,
        }
    }
}

/// Pixel-wise confusion table of a predicted mask against ground truth.
/// The masks must share dimensions.
pub fn seg_confusion(pred: &BinaryMask, gt: &BinaryMask) -> Result<ConfusionCounts> {
    if pred.width() != gt.width() || pred.height() != gt.height() {
        return Err(Error::DimensionMismatch {
            expected: (gt.width(), gt.height()),
            actual: (pred.width(), pred.height()),
        });
    }
    let mut c = ConfusionCounts::default();
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            match (pred.get(x, y), gt.get(x, y)) {
                (true, true) => c.true_pos += 1,
                (true, false) => c.false_pos += 1,
                (false, true) => c.false_neg += 1,
                (false, false) => c.true_neg += 1,
            }
        }
    }
    Ok(c)
}

/// Segmentation quality scores derived from one confusion table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegMetrics {
    pub accuracy: f64,
    pub dice: f64,
    pub jaccard: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    /// Set when any ratio was `0 / 0` and reported as 1.
    pub degenerate: bool,
}

/// Classification quality scores derived from one confusion table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClsMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub f1: f64,
    pub mcc: f64,
    /// Set when any ratio was degenerate (`0 / 0` or an MCC factor of 0).
    pub degenerate: bool,
}

fn ratio(num: u64, den: u64, degenerate: &mut bool) -> f64 {
    if den == 0 {
        *degenerate = true;
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// Mask-overlap metrics. Errors when the counts sum to zero.
pub fn seg_metrics(c: &ConfusionCounts) -> Result<SegMetrics> {
    if c.total() == 0 {
        return Err(Error::EmptyCounts);
    }
    let mut degenerate = false;
    let (tp, fp, fneg, tn) = (c.true_pos, c.false_pos, c.false_neg, c.true_neg);
    Ok(SegMetrics {
        accuracy: ratio(tp + tn, c.total(), &mut degenerate),
        dice: ratio(2 * tp, 2 * tp + fp + fneg, &mut degenerate),
        jaccard: ratio(tp, tp + fp + fneg, &mut degenerate),
        sensitivity: ratio(tp, tp + fneg, &mut degenerate),
        specificity: ratio(tn, tn + fp, &mut degenerate),
        degenerate,
    })
}

/// Classification metrics with the malignant side as the positive class.
/// Errors when the counts sum to zero.
pub fn cls_metrics(c: &ConfusionCounts) -> Result<ClsMetrics> {
    if c.total() == 0 {
        return Err(Error::EmptyCounts);
    }
    let mut degenerate = false;
    let (tp, fp, fneg, tn) = (c.true_pos, c.false_pos, c.false_neg, c.true_neg);

    // MCC in integer-exact pieces: the numerator fits i128 and each factor
    // fits u64 before the float conversion.
    let num = (tp as i128 * tn as i128) - (fp as i128 * fneg as i128);
    let factors = [tp + fp, tp + fneg, tn + fp, tn + fneg];
    let mcc = if factors.contains(&0) {
        degenerate = true;
        0.0
    } else {
        let den: f64 = factors.iter().map(|&f| f as f64).product::<f64>().sqrt();
        num as f64 / den
    };

    Ok(ClsMetrics {
        accuracy: ratio(tp + tn, c.total(), &mut degenerate),
        precision: ratio(tp, tp + fp, &mut degenerate),
        sensitivity: ratio(tp, tp + fneg, &mut degenerate),
        specificity: ratio(tn, tn + fp, &mut degenerate),
        f1: ratio(2 * tp, 2 * tp + fp + fneg, &mut degenerate),
        mcc,
        degenerate,
    })
}

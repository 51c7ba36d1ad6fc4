//! Matching external ROI detections against one ground-truth box per image
//! and aggregating precision, recall, and mean IoU over a dataset.
//!
//! The matching rule is deliberately strict about duplicates: each image has
//! exactly one ground-truth box, detections are ranked by confidence, and
//! only the first detection whose IoU clears the threshold counts as the
//! true positive. Every other detection on that image is a false positive,
//! including further detections that also clear the threshold.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::BBox;

/// A detected box with its confidence score.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Detection {
    bbox: BBox,
    score: f64,
}

impl Detection {
    /// Builds a detection; the score must be finite and in `[0, 1]`.
    pub fn new(bbox: BBox, score: f64) -> Result<Self> {
        if !score.is_finite() || !(0.0..=1.0).contains(&score) {
            return Err(Error::InvalidScore(score));
        }
        Ok(Detection { bbox, score })
    }

    pub fn bbox(&self) -> &BBox {
        &self.bbox
    }

    pub fn score(&self) -> f64 {
        self.score
    }
}

/// Rank order used everywhere detections compete: higher score first, then
/// larger area, then the lexicographically smallest coordinate tuple. The
/// order is total, so any permutation of the same detections ranks the same.
fn rank(a: &Detection, b: &Detection) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| b.bbox.area().cmp(&a.bbox.area()))
        .then_with(|| a.bbox.cmp(&b.bbox))
}

/// How images with no matched ground truth are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FnMode {
    /// A false negative is an image with no detections at all. An image
    /// whose detections all miss contributes only false positives.
    #[default]
    EmptyImages,
    /// A false negative is any image whose ground truth went unmatched,
    /// whether or not detections were present.
    Unmatched,
}

/// Per-image tallies produced by [`match_image`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImageOutcome {
    pub true_positives: u32,
    pub false_positives: u32,
    pub false_negatives: u32,
    /// IoU of the matched detection; present exactly when
    /// `true_positives == 1`.
    pub matched_iou: Option<f64>,
}

/// Classifies the detections of a single image against its ground truth.
///
/// Detections are ranked by [`rank`]; the first whose IoU with the ground
/// truth is strictly above `threshold` is the single true positive, and all
/// remaining detections are false positives.
pub fn match_image(
    gt: &BBox,
    detections: &[Detection],
    threshold: f64,
    mode: FnMode,
) -> ImageOutcome {
    let mut order: Vec<usize> = (0..detections.len()).collect();
    order.sort_by(|&a, &b| rank(&detections[a], &detections[b]));

    let mut matched_iou = None;
    for &i in &order {
        let iou = gt.iou(detections[i].bbox());
        if iou > threshold {
            matched_iou = Some(iou);
            break;
        }
    }

    let tp = u32::from(matched_iou.is_some());
    let false_negatives = match mode {
        FnMode::EmptyImages => u32::from(detections.is_empty()),
        FnMode::Unmatched => 1 - tp,
    };
    ImageOutcome {
        true_positives: tp,
        false_positives: detections.len() as u32 - tp,
        false_negatives,
        matched_iou,
    }
}

/// One image's ground truth and the detections submitted for it.
#[derive(Clone, Debug)]
pub struct EvalItem {
    pub image_id: String,
    pub gt: BBox,
    pub detections: Vec<Detection>,
}

/// Dataset-level result at one IoU threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalReport {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    /// Mean IoU over true-positive images only.
    pub mean_iou: f64,
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub n_images: u64,
    /// Set when any ratio had a zero denominator and was reported as 0.
    pub degenerate: bool,
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !threshold.is_finite() || threshold <= 0.0 || threshold >= 1.0 {
        return Err(Error::InvalidThresholds(format!(
            "threshold must lie strictly between 0 and 1, got {threshold}"
        )));
    }
    Ok(())
}

/// Evaluates a dataset of per-image detections at a single IoU threshold.
///
/// Image ids must be unique. Precision is `tp / (tp + fp)`, recall is
/// `tp / (tp + fn)`, and mean IoU averages the matched IoU of the
/// true-positive images; any ratio with a zero denominator is reported as 0
/// and flagged via [`EvalReport::degenerate`].
pub fn evaluate(items: &[EvalItem], threshold: f64, mode: FnMode) -> Result<EvalReport> {
    check_threshold(threshold)?;
    let mut seen = BTreeSet::new();
    for item in items {
        if !seen.insert(item.image_id.as_str()) {
            return Err(Error::DuplicateImageId(item.image_id.clone()));
        }
    }

    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fneg = 0u64;
    let mut iou_sum = 0.0;
    for item in items {
        let o = match_image(&item.gt, &item.detections, threshold, mode);
        tp += u64::from(o.true_positives);
        fp += u64::from(o.false_positives);
        fneg += u64::from(o.false_negatives);
        iou_sum += o.matched_iou.unwrap_or(0.0);
    }

    let mut degenerate = false;
    let mut ratio = |num: u64, den: u64| {
        if den == 0 {
            degenerate = true;
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fneg);
    let mean_iou = if tp == 0 {
        degenerate = true;
        0.0
    } else {
        iou_sum / tp as f64
    };

    Ok(EvalReport {
        threshold,
        precision,
        recall,
        mean_iou,
        true_positives: tp,
        false_positives: fp,
        false_negatives: fneg,
        n_images: items.len() as u64,
        degenerate,
    })
}

/// Runs [`evaluate`] once per threshold. Thresholds must be strictly
/// increasing and each strictly inside `(0, 1)`; every row is an
/// independent evaluation, not an incremental update.
pub fn threshold_sweep(
    items: &[EvalItem],
    thresholds: &[f64],
    mode: FnMode,
) -> Result<Vec<EvalReport>> {
    if thresholds.is_empty() {
        return Err(Error::InvalidThresholds("threshold list is empty".into()));
    }
    for pair in thresholds.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::InvalidThresholds(format!(
                "thresholds must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    thresholds
        .iter()
        .map(|&t| evaluate(items, t, mode))
        .collect()
}

/// Picks the one detection an image keeps when a single box is needed:
/// highest confidence, ties broken by larger area, then by smallest
/// coordinate tuple. Errors on an empty list.
pub fn select_primary(detections: &[Detection]) -> Result<&Detection> {
    detections
        .iter()
        .min_by(|a, b| rank(a, b))
        .ok_or(Error::NoDetections)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(x0: i64, y0: i64, x1: i64, y1: i64) -> BBox {
        BBox::new(x0, y0, x1, y1).unwrap()
    }

    fn det(x0: i64, y0: i64, x1: i64, y1: i64, score: f64) -> Detection {
        Detection::new(bx(x0, y0, x1, y1), score).unwrap()
    }

    fn item(id: &str, gt: BBox, detections: Vec<Detection>) -> EvalItem {
        EvalItem {
            image_id: id.to_string(),
            gt,
            detections,
        }
    }

    #[test]
    fn score_validation() {
        assert!(Detection::new(bx(0, 0, 1, 1), -0.1).is_err());
        assert!(Detection::new(bx(0, 0, 1, 1), 1.1).is_err());
        assert!(Detection::new(bx(0, 0, 1, 1), f64::NAN).is_err());
        assert!(Detection::new(bx(0, 0, 1, 1), 0.0).is_ok());
        assert!(Detection::new(bx(0, 0, 1, 1), 1.0).is_ok());
    }

    #[test]
    fn duplicate_above_threshold_is_false_positive() {
        // Second detection overlaps the ground truth at 81/119, well above
        // 0.5, but the higher-confidence exact hit already took the TP.
        let gt = bx(0, 0, 10, 10);
        let dets = vec![det(0, 0, 10, 10, 0.9), det(1, 1, 11, 11, 0.8)];
        assert_eq!(dets[1].bbox().iou(&gt), 81.0 / 119.0);

        let o = match_image(&gt, &dets, 0.5, FnMode::EmptyImages);
        assert_eq!(o.true_positives, 1);
        assert_eq!(o.false_positives, 1);
        assert_eq!(o.false_negatives, 0);
        assert_eq!(o.matched_iou, Some(1.0));
    }

    #[test]
    fn confidence_beats_overlap_quality() {
        // The top-ranked detection clears the threshold, so it wins even
        // though a lower-confidence detection overlaps better.
        let gt = bx(0, 0, 10, 10);
        let dets = vec![det(1, 1, 11, 11, 0.9), det(0, 0, 10, 10, 0.8)];
        let o = match_image(&gt, &dets, 0.5, FnMode::EmptyImages);
        assert_eq!(o.true_positives, 1);
        assert_eq!(o.matched_iou, Some(81.0 / 119.0));
    }

    #[test]
    fn ranking_skips_below_threshold_leaders() {
        // The highest-confidence detection misses; the next one that clears
        // the threshold becomes the TP.
        let gt = bx(0, 0, 10, 10);
        let dets = vec![det(40, 40, 50, 50, 0.95), det(0, 0, 10, 10, 0.2)];
        let o = match_image(&gt, &dets, 0.5, FnMode::EmptyImages);
        assert_eq!(o.true_positives, 1);
        assert_eq!(o.false_positives, 1);
        assert_eq!(o.matched_iou, Some(1.0));
    }

    #[test]
    fn equal_scores_prefer_larger_area() {
        let gt = bx(0, 0, 20, 20);
        // Both clear the threshold at equal confidence; the larger box is
        // ranked first and takes the match.
        let small = det(0, 0, 15, 15, 0.7);
        let large = det(0, 0, 20, 20, 0.7);
        let o = match_image(&gt, &[small, large], 0.5, FnMode::EmptyImages);
        assert_eq!(o.matched_iou, Some(1.0));
    }

    #[test]
    fn missed_image_counts_by_mode() {
        let gt = bx(0, 0, 10, 10);
        let miss = vec![det(40, 40, 50, 50, 0.9)];

        let empty_mode = match_image(&gt, &miss, 0.5, FnMode::EmptyImages);
        assert_eq!(empty_mode.false_negatives, 0);
        assert_eq!(empty_mode.false_positives, 1);

        let unmatched_mode = match_image(&gt, &miss, 0.5, FnMode::Unmatched);
        assert_eq!(unmatched_mode.false_negatives, 1);

        let no_dets = match_image(&gt, &[], 0.5, FnMode::EmptyImages);
        assert_eq!(no_dets.false_negatives, 1);
        assert_eq!(no_dets.true_positives, 0);
        assert_eq!(no_dets.false_positives, 0);
    }

    #[test]
    fn iou_at_threshold_does_not_match() {
        // Exactly half overlap: 0.5 is not strictly greater than 0.5.
        let gt = bx(0, 0, 10, 10);
        let dets = vec![det(0, 0, 10, 5, 1.0)];
        let o = match_image(&gt, &dets, 0.5, FnMode::EmptyImages);
        assert_eq!(o.true_positives, 0);
        assert_eq!(o.false_positives, 1);
    }

    #[test]
    fn perfect_detections_score_one() {
        let items = vec![
            item("a", bx(0, 0, 10, 10), vec![det(0, 0, 10, 10, 0.9)]),
            item("b", bx(5, 5, 25, 30), vec![det(5, 5, 25, 30, 0.8)]),
        ];
        for threshold in [0.5, 0.75] {
            let r = evaluate(&items, threshold, FnMode::EmptyImages).unwrap();
            assert_eq!(r.precision, 1.0);
            assert_eq!(r.recall, 1.0);
            assert_eq!(r.mean_iou, 1.0);
            assert_eq!(
                (r.true_positives, r.false_positives, r.false_negatives),
                (2, 0, 0)
            );
            assert!(!r.degenerate);
        }
    }

    #[test]
    fn mixed_dataset_ratios() {
        // One clean hit, one hit with an extra duplicate, one empty image:
        // tp=2, fp=1, fn=1 at threshold 0.5.
        let items = vec![
            item("a", bx(0, 0, 10, 10), vec![det(0, 0, 10, 10, 0.9)]),
            item(
                "b",
                bx(0, 0, 10, 10),
                vec![det(0, 0, 10, 10, 0.9), det(1, 1, 11, 11, 0.8)],
            ),
            item("c", bx(0, 0, 10, 10), vec![]),
        ];
        let r = evaluate(&items, 0.5, FnMode::EmptyImages).unwrap();
        assert_eq!(
            (r.true_positives, r.false_positives, r.false_negatives),
            (2, 1, 1)
        );
        assert_eq!(r.precision, 2.0 / 3.0);
        assert_eq!(r.recall, 2.0 / 3.0);
        assert_eq!(r.mean_iou, 1.0);
    }

    #[test]
    fn zero_denominators_flagged() {
        let r = evaluate(
            &[item("a", bx(0, 0, 10, 10), vec![])],
            0.5,
            FnMode::EmptyImages,
        )
        .unwrap();
        assert_eq!(r.precision, 0.0);
        assert_eq!(r.mean_iou, 0.0);
        assert!(r.degenerate);
    }

    #[test]
    fn evaluate_rejects_bad_inputs() {
        let items = vec![
            item("a", bx(0, 0, 10, 10), vec![]),
            item("a", bx(0, 0, 10, 10), vec![]),
        ];
        assert!(matches!(
            evaluate(&items, 0.5, FnMode::EmptyImages),
            Err(Error::DuplicateImageId(_))
        ));
        assert!(evaluate(&[], 0.0, FnMode::EmptyImages).is_err());
        assert!(evaluate(&[], 1.0, FnMode::EmptyImages).is_err());
    }

    #[test]
    fn sweep_validates_grid() {
        assert!(threshold_sweep(&[], &[], FnMode::EmptyImages).is_err());
        assert!(threshold_sweep(&[], &[0.5, 0.5], FnMode::EmptyImages).is_err());
        assert!(threshold_sweep(&[], &[0.7, 0.5], FnMode::EmptyImages).is_err());
    }

    #[test]
    fn sweep_rows_match_single_evaluations() {
        let items = vec![
            item("a", bx(0, 0, 10, 10), vec![det(1, 1, 11, 11, 0.9)]),
            item("b", bx(0, 0, 10, 10), vec![det(3, 3, 13, 13, 0.6)]),
            item("c", bx(0, 0, 10, 10), vec![]),
        ];
        let grid = [0.25, 0.5, 0.75];
        let rows = threshold_sweep(&items, &grid, FnMode::EmptyImages).unwrap();
        for (row, &t) in rows.iter().zip(&grid) {
            assert_eq!(*row, evaluate(&items, t, FnMode::EmptyImages).unwrap());
        }
    }

    #[test]
    fn select_primary_applies_tie_breaks() {
        let by_score = [det(0, 0, 5, 5, 0.3), det(10, 10, 12, 12, 0.8)];
        assert_eq!(select_primary(&by_score).unwrap(), &by_score[1]);

        let by_area = [det(0, 0, 5, 5, 0.8), det(10, 10, 20, 20, 0.8)];
        assert_eq!(select_primary(&by_area).unwrap(), &by_area[1]);

        let by_tuple = [det(4, 4, 9, 9, 0.8), det(3, 4, 8, 9, 0.8)];
        assert_eq!(select_primary(&by_tuple).unwrap(), &by_tuple[1]);

        assert!(matches!(select_primary(&[]), Err(Error::NoDetections)));
    }

    // ---- randomized agreement with a deliberately naive matcher ----

    /// IoU by counting pixels; shares nothing with the closed-form path.
    fn raster_iou(a: &BBox, b: &BBox) -> f64 {
        let (mut inter, mut union) = (0u64, 0u64);
        for y in 0..a.y_max().max(b.y_max()) {
            for x in 0..a.x_max().max(b.x_max()) {
                match (a.contains_pixel(x, y), b.contains_pixel(x, y)) {
                    (true, true) => {
                        inter += 1;
                        union += 1;
                    }
                    (true, false) | (false, true) => union += 1,
                    _ => {}
                }
            }
        }
        inter as f64 / union as f64
    }

    /// Repeatedly scans for the best-ranked unvisited detection and stops
    /// at the first one that clears the threshold. No sorting involved.
    fn naive_outcome(
        gt: &BBox,
        dets: &[Detection],
        threshold: f64,
        mode: FnMode,
    ) -> (u32, u32, u32, Option<f64>) {
        let mut visited = vec![false; dets.len()];
        let mut matched = None;
        for _ in 0..dets.len() {
            let mut best: Option<usize> = None;
            for (i, d) in dets.iter().enumerate() {
                if visited[i] {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(j) => {
                        let (a, b) = (d, &dets[j]);
                        a.score() > b.score()
                            || (a.score() == b.score() && a.bbox().area() > b.bbox().area())
                            || (a.score() == b.score()
                                && a.bbox().area() == b.bbox().area()
                                && a.bbox().as_tuple() < b.bbox().as_tuple())
                    }
                };
                if better {
                    best = Some(i);
                }
            }
            let i = best.unwrap();
            visited[i] = true;
            if raster_iou(gt, dets[i].bbox()) > threshold {
                matched = Some(raster_iou(gt, dets[i].bbox()));
                break;
            }
        }
        let tp = u32::from(matched.is_some());
        let fneg = match mode {
            FnMode::EmptyImages => u32::from(dets.is_empty()),
            FnMode::Unmatched => 1 - tp,
        };
        (tp, dets.len() as u32 - tp, fneg, matched)
    }

    fn arb_box(max: i64) -> impl Strategy<Value = BBox> {
        (0..max, 0..max).prop_flat_map(move |(x0, y0)| {
            ((x0 + 1)..=max, (y0 + 1)..=max)
                .prop_map(move |(x1, y1)| BBox::new(x0, y0, x1, y1).unwrap())
        })
    }

    fn arb_detections() -> impl Strategy<Value = Vec<Detection>> {
        // Scores drawn from eighths so ties actually occur.
        prop::collection::vec(
            (arb_box(32), 0u8..=8)
                .prop_map(|(b, s)| Detection::new(b, f64::from(s) / 8.0).unwrap()),
            0..6,
        )
    }

    proptest! {
        #[test]
        fn match_image_agrees_with_naive_matcher(
            gt in arb_box(32),
            dets in arb_detections(),
            t in prop::sample::select(vec![0.25, 0.5, 0.75]),
        ) {
            for mode in [FnMode::EmptyImages, FnMode::Unmatched] {
                let o = match_image(&gt, &dets, t, mode);
                let (tp, fp, fneg, iou) = naive_outcome(&gt, &dets, t, mode);
                prop_assert_eq!(o.true_positives, tp);
                prop_assert_eq!(o.false_positives, fp);
                prop_assert_eq!(o.false_negatives, fneg);
                prop_assert_eq!(o.matched_iou, iou);
            }
        }

        /// Every detection lands in exactly one bucket.
        #[test]
        fn detections_partition_into_tp_and_fp(
            gt in arb_box(32),
            dets in arb_detections(),
        ) {
            let o = match_image(&gt, &dets, 0.5, FnMode::EmptyImages);
            prop_assert_eq!(
                u64::from(o.true_positives) + u64::from(o.false_positives),
                dets.len() as u64
            );
            prop_assert!(o.true_positives <= 1);
        }

        /// The primary pick does not depend on input order.
        #[test]
        fn select_primary_is_permutation_invariant(
            dets in arb_detections().prop_filter("nonempty", |d| !d.is_empty()),
            rotation in 0usize..6,
        ) {
            let baseline = *select_primary(&dets).unwrap();
            let mut shuffled = dets.clone();
            shuffled.rotate_left(rotation % dets.len());
            prop_assert_eq!(*select_primary(&shuffled).unwrap(), baseline);
        }

        /// Precision and recall never increase as the threshold rises.
        #[test]
        fn sweep_is_monotone(
            gts in prop::collection::vec(arb_box(32), 1..8),
            all_dets in prop::collection::vec(arb_detections(), 8),
        ) {
            let items: Vec<EvalItem> = gts
                .into_iter()
                .zip(&all_dets)
                .enumerate()
                .map(|(i, (gt, dets))| item(&format!("img{i}"), gt, dets.clone()))
                .collect();
            let grid = [0.2, 0.35, 0.5, 0.65, 0.8];
            for mode in [FnMode::EmptyImages, FnMode::Unmatched] {
                let rows = threshold_sweep(&items, &grid, mode).unwrap();
                for pair in rows.windows(2) {
                    prop_assert!(pair[1].precision <= pair[0].precision + 1e-12);
                    prop_assert!(pair[1].recall <= pair[0].recall + 1e-12);
                }
            }
        }
    }
}

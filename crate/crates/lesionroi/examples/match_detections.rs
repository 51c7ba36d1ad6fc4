//! Match scored detection boxes against ground truth for one image, then
//! aggregate a three-image evaluation into precision and recall.
//!
//! Run with: cargo run --example match_detections

use lesionroi::{evaluate, match_image, BBox, Detection, EvalItem, FnMode};

fn main() -> lesionroi::Result<()> {
    // 1. One image: the ground truth and three competing detections.
    let gt = BBox::new(0, 0, 10, 10)?;
    let detections = vec![
        Detection::new(BBox::new(1, 1, 11, 11)?, 0.90)?,
        Detection::new(BBox::new(0, 0, 10, 10)?, 0.80)?,
        Detection::new(BBox::new(40, 40, 50, 50)?, 0.95)?,
    ];

    // 2. The highest-scoring detection is tried first; here it misses the
    //    lesion entirely, so the 0.90 box becomes the single true positive
    //    and everything else counts as a false positive.
    let outcome = match_image(&gt, &detections, 0.5, FnMode::EmptyImages);
    println!(
        "tp={} fp={} fn={} matched_iou={:?}",
        outcome.true_positives, outcome.false_positives, outcome.false_negatives,
        outcome.matched_iou
    );
    assert_eq!(outcome.true_positives, 1);
    assert_eq!(outcome.false_positives, 2);

    // 3. A small batch: perfect image, imperfect image, empty image.
    let items = vec![
        EvalItem {
            image_id: "a".into(),
            gt: BBox::new(5, 5, 50, 60)?,
            detections: vec![Detection::new(BBox::new(5, 5, 50, 60)?, 1.0)?],
        },
        EvalItem {
            image_id: "b".into(),
            gt: BBox::new(0, 0, 10, 10)?,
            detections: vec![Detection::new(BBox::new(6, 6, 16, 16)?, 0.7)?],
        },
        EvalItem {
            image_id: "c".into(),
            gt: BBox::new(2, 2, 9, 9)?,
            detections: vec![],
        },
    ];
    let report = evaluate(&items, 0.5, FnMode::EmptyImages)?;
    println!(
        "threshold={} precision={:.4} recall={:.4} mean_iou={:.4} (tp={} fp={} fn={})",
        report.threshold,
        report.precision,
        report.recall,
        report.mean_iou,
        report.true_positives,
        report.false_positives,
        report.false_negatives
    );
    assert_eq!(
        (report.true_positives, report.false_positives, report.false_negatives),
        (1, 1, 1)
    );
    Ok(())
}

//! Sweep the IoU threshold and watch precision and recall decay.
//!
//! The same detections are re-evaluated at each threshold; nothing is
//! re-ranked, so the curve is monotone non-increasing.
//!
//! Run with: cargo run --example threshold_sweep

use lesionroi::{threshold_sweep, BBox, Detection, EvalItem, FnMode};

fn main() -> lesionroi::Result<()> {
    // 1. Three images whose best detections overlap at different qualities.
    let items = vec![
        EvalItem {
            image_id: "tight".into(),
            gt: BBox::new(10, 10, 110, 110)?,
            detections: vec![Detection::new(BBox::new(12, 12, 112, 112)?, 0.9)?],
        },
        EvalItem {
            image_id: "loose".into(),
            gt: BBox::new(10, 10, 110, 110)?,
            detections: vec![Detection::new(BBox::new(40, 40, 140, 140)?, 0.8)?],
        },
        EvalItem {
            image_id: "offset".into(),
            gt: BBox::new(10, 10, 110, 110)?,
            detections: vec![Detection::new(BBox::new(25, 25, 125, 125)?, 0.7)?],
        },
    ];

    // 2. An inclusive grid from 0.30 to 0.90.
    let thresholds: Vec<f64> = (0..7).map(|k| 0.30 + k as f64 * 0.10).collect();
    let reports = threshold_sweep(&items, &thresholds, FnMode::EmptyImages)?;

    println!("threshold  precision  recall  mean_iou");
    for r in &reports {
        println!(
            "{:>9.2}  {:>9.4}  {:>6.4}  {:>8.4}",
            r.threshold, r.precision, r.recall, r.mean_iou
        );
    }

    // 3. Monotonicity check: tightening the threshold never helps.
    for pair in reports.windows(2) {
        assert!(pair[1].precision <= pair[0].precision);
        assert!(pair[1].recall <= pair[0].recall);
    }
    Ok(())
}

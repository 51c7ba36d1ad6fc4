//! Score a predicted segmentation mask against ground truth.
//!
//! Run with: cargo run --example segmentation_metrics

use lesionroi::{seg_confusion, seg_metrics, BinaryMask};

fn main() -> lesionroi::Result<()> {
    // 1. Ground truth: a 10x10 lesion block in a 20x20 frame. Prediction:
    //    the same block shifted two pixels right.
    let mut gt = BinaryMask::filled(20, 20, false)?;
    let mut pred = BinaryMask::filled(20, 20, false)?;
    for y in 5..15 {
        for x in 5..15 {
            gt.set(x, y, true);
            pred.set(x + 2, y, true);
        }
    }

    // 2. Pixel confusion counts feed every metric.
    let counts = seg_confusion(&pred, &gt)?;
    println!(
        "tp={} fp={} fn={} tn={}",
        counts.true_pos, counts.false_pos, counts.false_neg, counts.true_neg
    );

    let m = seg_metrics(&counts)?;
    println!(
        "accuracy={:.4} dice={:.4} jaccard={:.4} sensitivity={:.4} specificity={:.4}",
        m.accuracy, m.dice, m.jaccard, m.sensitivity, m.specificity
    );

    // 3. The overlap is 80 of 100 pixels each way, so dice is 0.8 and
    //    jaccard is 80/120.
    assert!((m.dice - 0.8).abs() < 1e-12);
    assert!((m.jaccard - 80.0 / 120.0).abs() < 1e-12);
    Ok(())
}

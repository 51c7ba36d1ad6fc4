//! Compute classification metrics, including Matthews correlation, from a
//! confusion matrix.
//!
//! Run with: cargo run --example classification_metrics

use lesionroi::{cls_metrics, ConfusionCounts};

fn main() -> lesionroi::Result<()> {
    // 1. A malignant-vs-benign screen: 90 hits, 20 false alarms,
    //    10 misses, 80 correct rejections.
    let counts = ConfusionCounts::new(90, 20, 10, 80);
    let m = cls_metrics(&counts)?;

    println!(
        "accuracy={:.4} precision={:.4} sensitivity={:.4} specificity={:.4}",
        m.accuracy, m.precision, m.sensitivity, m.specificity
    );
    println!("f1={:.4} mcc={:.4}", m.f1, m.mcc);
    assert!((m.mcc - 0.703526).abs() < 1e-6);

    // 2. MCC stays meaningful under class imbalance where accuracy does
    //    not: predict everything negative on a 95:5 split and accuracy
    //    still reads 0.95 while MCC collapses to zero.
    let lazy = ConfusionCounts::new(0, 0, 5, 95);
    let lazy_m = cls_metrics(&lazy)?;
    println!(
        "lazy classifier: accuracy={:.4} mcc={:.4} degenerate={}",
        lazy_m.accuracy, lazy_m.mcc, lazy_m.degenerate
    );
    assert!(lazy_m.degenerate);
    Ok(())
}

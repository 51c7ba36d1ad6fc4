//! CSV report writers. Headers are fixed, floats always carry six decimal
//! digits, and flags are written as 0/1, so reports for identical inputs
//! are byte-identical.

use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::EvalReport;
use crate::metrics::{ClsMetrics, SegMetrics};

use super::gt::Reject;
use super::write_atomic;

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn csv_bytes(path: &Path, rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let to_err = |msg: String| Error::ManifestParse {
        path: path.to_path_buf(),
        msg,
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).map_err(|e| to_err(e.to_string()))?;
    }
    w.into_inner().map_err(|e| to_err(e.to_string()))
}

fn header(fields: &[&str]) -> Vec<String> {
    fields.iter().map(|s| s.to_string()).collect()
}

/// Detection evaluation report: one row per threshold with the ratios and
/// the raw counts behind them.
pub fn write_eval_report(path: &Path, reports: &[EvalReport]) -> Result<()> {
    let mut rows = vec![header(&[
        "threshold",
        "precision",
        "recall",
        "mean_iou",
        "tp",
        "fp",
        "fn",
        "n_images",
        "degenerate",
    ])];
    for r in reports {
        rows.push(vec![
            f6(r.threshold),
            f6(r.precision),
            f6(r.recall),
            f6(r.mean_iou),
            r.true_positives.to_string(),
            r.false_positives.to_string(),
            r.false_negatives.to_string(),
            r.n_images.to_string(),
            flag(r.degenerate).to_string(),
        ]);
    }
    write_atomic(path, &csv_bytes(path, rows)?)
}

/// Threshold-sweep curve: the ratio columns only, one row per threshold.
pub fn write_curve(path: &Path, reports: &[EvalReport]) -> Result<()> {
    let mut rows = vec![header(&["threshold", "precision", "recall", "mean_iou"])];
    for r in reports {
        rows.push(vec![
            f6(r.threshold),
            f6(r.precision),
            f6(r.recall),
            f6(r.mean_iou),
        ]);
    }
    write_atomic(path, &csv_bytes(path, rows)?)
}

fn seg_row(m: &SegMetrics) -> Vec<String> {
    vec![
        f6(m.accuracy),
        f6(m.dice),
        f6(m.jaccard),
        f6(m.sensitivity),
        f6(m.specificity),
        flag(m.degenerate).to_string(),
    ]
}

/// Dataset-level segmentation report; `average` names the averaging mode
/// that produced the metrics.
pub fn write_seg_report(path: &Path, average: &str, images: u64, m: &SegMetrics) -> Result<()> {
    let mut row = vec![average.to_string(), images.to_string()];
    row.extend(seg_row(m));
    let rows = vec![
        header(&[
            "average",
            "images",
            "accuracy",
            "dice",
            "jaccard",
            "sensitivity",
            "specificity",
            "degenerate",
        ]),
        row,
    ];
    write_atomic(path, &csv_bytes(path, rows)?)
}

/// Per-image segmentation breakdown, sorted by image id.
pub fn write_seg_per_image(path: &Path, rows_in: &[(String, SegMetrics)]) -> Result<()> {
    let mut sorted: Vec<&(String, SegMetrics)> = rows_in.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut rows = vec![header(&[
        "image_id",
        "accuracy",
        "dice",
        "jaccard",
        "sensitivity",
        "specificity",
        "degenerate",
    ])];
    for (id, m) in sorted {
        let mut row = vec![id.clone()];
        row.extend(seg_row(m));
        rows.push(row);
    }
    write_atomic(path, &csv_bytes(path, rows)?)
}

/// Classification report over the whole prediction set.
pub fn write_cls_report(path: &Path, samples: u64, m: &ClsMetrics) -> Result<()> {
    let rows = vec![
        header(&[
            "samples",
            "accuracy",
            "precision",
            "sensitivity",
            "specificity",
            "f1",
            "mcc",
            "degenerate",
        ]),
        vec![
            samples.to_string(),
            f6(m.accuracy),
            f6(m.precision),
            f6(m.sensitivity),
            f6(m.specificity),
            f6(m.f1),
            f6(m.mcc),
            flag(m.degenerate).to_string(),
        ],
    ];
    write_atomic(path, &csv_bytes(path, rows)?)
}

/// Per-item failure report, sorted by image id.
pub fn write_rejects(path: &Path, rejects: &[Reject]) -> Result<()> {
    let mut sorted: Vec<&Reject> = rejects.iter().collect();
    sorted.sort_by(|a, b| a.image_id.cmp(&b.image_id));
    let mut rows = vec![header(&["image_id", "reason"])];
    for r in sorted {
        rows.push(vec![r.image_id.clone(), r.reason.clone()]);
    }
    write_atomic(path, &csv_bytes(path, rows)?)
}

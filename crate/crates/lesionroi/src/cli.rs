//! Batch command-line front end.
//!
//! Exposed as a library function so the thin `lesionroi` binary and the
//! tests share one entry point: [`run`] parses arguments, executes one
//! subcommand, prints a single machine-parsable summary line to stdout, and
//! returns the process exit code.
//!
//! Exit codes: 0 on success, 1 when the run finished but some items were
//! rejected (a rejects report lists them), 2 on configuration or input
//! errors before processing starts.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::augment::{apply_plan, plan, AugmentParams};
use crate::dataset::{
    self, load_manifest, read_detections, AugmentedOutput, DatasetEntry, DatasetIndex,
    DetectionsFile, Reject,
};
use crate::error::{Error, Result};
use crate::eval::{select_primary, threshold_sweep, EvalItem, FnMode};
use crate::geometry::{BBox, QuarterTurn};
use crate::metrics::{cls_metrics, seg_confusion, seg_metrics, ConfusionCounts, SegMetrics};
use crate::raster::resize_bilinear;

#[derive(Debug, Parser)]
#[command(
    name = "lesionroi",
    version,
    about = "Lesion ROI dataset toolkit: ground-truth boxes, detection \
             evaluation, and ROI-centered augmentation"
)]
struct Cli {
    /// Worker threads for per-image work; falls back to the
    /// LESIONROI_WORKERS environment variable, then to all cores
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert segmentation masks into an ROI bounding-box table
    ConvertGt(ConvertGtArgs),
    /// Evaluate detection boxes against ground truth at IoU thresholds
    EvalDet(EvalDetArgs),
    /// Score predicted masks against ground-truth masks
    EvalSeg(EvalSegArgs),
    /// Score predicted labels against manifest labels
    EvalCls(EvalClsArgs),
    /// Cut ROI-centered crops at several magnifications and rotations
    Augment(AugmentArgs),
    /// Resize every image (and mask) to fixed dimensions
    Resize(ResizeArgs),
    /// Evaluate detections across a grid of IoU thresholds
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct ConvertGtArgs {
    /// Dataset manifest CSV
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Output ground-truth table CSV
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Rejects report path (default: <out>.rejects.csv next to the table)
    #[arg(long, value_name = "FILE")]
    rejects: Option<PathBuf>,
    /// Box only the largest 4-connected blob instead of all foreground
    #[arg(long)]
    largest_component: bool,
}

#[derive(Debug, Args)]
struct EvalDetArgs {
    /// Dataset manifest CSV
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Ground-truth box table CSV
    #[arg(long, value_name = "FILE")]
    gt: PathBuf,
    /// Detections file, one JSON object per line
    #[arg(long, value_name = "FILE")]
    dets: PathBuf,
    /// IoU thresholds, strictly increasing, each in (0, 1)
    #[arg(long, value_name = "T", num_args = 1.., default_values_t = vec![0.5, 0.75])]
    iou: Vec<f64>,
    /// How unmatched images count toward false negatives
    #[arg(long, value_enum, default_value_t = FnModeArg::Empty)]
    fn_mode: FnModeArg,
    /// Output report CSV
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalSegArgs {
    /// Dataset manifest CSV; every entry needs a mask_path
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Directory of predicted masks named {image_id}.png
    #[arg(long, value_name = "DIR")]
    pred_dir: PathBuf,
    /// Dataset averaging mode
    #[arg(long, value_enum, default_value_t = AverageArg::PerImage)]
    average: AverageArg,
    /// Output report CSV
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Optional per-image breakdown CSV
    #[arg(long, value_name = "FILE")]
    per_image: Option<PathBuf>,
    /// Rejects report path (default: <out>.rejects.csv)
    #[arg(long, value_name = "FILE")]
    rejects: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalClsArgs {
    /// Dataset manifest CSV; every entry needs a label
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Predicted labels CSV with header image_id,label
    #[arg(long, value_name = "FILE")]
    pred: PathBuf,
    /// Output report CSV
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct AugmentArgs {
    /// Dataset manifest CSV
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Output directory for the augmented set
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Where the ROI box comes from
    #[arg(long, value_enum, default_value_t = RoiSourceArg::Mask)]
    roi_source: RoiSourceArg,
    /// Detections file, required with --roi-source dets
    #[arg(long, value_name = "FILE")]
    dets: Option<PathBuf>,
    /// Side of every output image in pixels
    #[arg(long, value_name = "PX", default_value_t = 224)]
    target: u32,
    /// Fractional padding around the ROI at the tightest level
    #[arg(long, value_name = "FRAC", default_value_t = 0.10)]
    margin: f64,
    /// Multiplicative spacing between magnification levels
    #[arg(long, value_name = "FACTOR", default_value_t = 1.5)]
    step: f64,
    /// Append the full-frame level only when it exceeds the last level by
    /// more than this fraction
    #[arg(long, value_name = "FRAC", default_value_t = 0.10)]
    terminal_slack: f64,
    /// Rotations to apply, in degrees
    #[arg(
        long,
        value_name = "DEG",
        value_delimiter = ',',
        default_values_t = vec![0, 90, 180, 270]
    )]
    rotations: Vec<u32>,
    /// Derive mask ROIs from the largest blob only
    #[arg(long)]
    largest_component: bool,
}

#[derive(Debug, Args)]
struct ResizeArgs {
    /// Dataset manifest CSV
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Target width in pixels
    #[arg(long, value_name = "PX", default_value_t = 500)]
    width: u32,
    /// Target height in pixels
    #[arg(long, value_name = "PX", default_value_t = 375)]
    height: u32,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Dataset manifest CSV
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Ground-truth box table CSV
    #[arg(long, value_name = "FILE")]
    gt: PathBuf,
    /// Detections file, one JSON object per line
    #[arg(long, value_name = "FILE")]
    dets: PathBuf,
    /// First threshold of the grid
    #[arg(long, value_name = "T", default_value_t = 0.50)]
    start: f64,
    /// Last threshold of the grid
    #[arg(long, value_name = "T", default_value_t = 0.95)]
    stop: f64,
    /// Grid spacing
    #[arg(long, value_name = "T", default_value_t = 0.05)]
    step_size: f64,
    /// How unmatched images count toward false negatives
    #[arg(long, value_enum, default_value_t = FnModeArg::Empty)]
    fn_mode: FnModeArg,
    /// Output curve CSV
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FnModeArg {
    /// A false negative is an image with no detections at all
    Empty,
    /// A false negative is any image whose ground truth went unmatched
    Standard,
}

impl From<FnModeArg> for FnMode {
    fn from(arg: FnModeArg) -> FnMode {
        match arg {
            FnModeArg::Empty => FnMode::EmptyImages,
            FnModeArg::Standard => FnMode::Unmatched,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AverageArg {
    /// Average the metrics of each image
    PerImage,
    /// Pool the pixel counts of all images, then compute metrics once
    Pooled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RoiSourceArg {
    /// Tight box of the entry's segmentation mask
    Mask,
    /// Primary detection from a detections file
    Dets,
}

/// Summary line plus whether any items were rejected.
struct RunReport {
    line: String,
    partial: bool,
}

impl RunReport {
    fn ok(line: String) -> Self {
        RunReport {
            line,
            partial: false,
        }
    }

    fn with_rejects(line: String, rejects: usize) -> Self {
        RunReport {
            line,
            partial: rejects > 0,
        }
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
/// Returns the process exit code; the caller decides what to do with it.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return code;
        }
    };

    let outcome = resolve_workers(cli.workers).and_then(|workers| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParams(format!("cannot build worker pool: {e}")))?;
        pool.install(|| dispatch(cli.command))
    });

    match outcome {
        Ok(report) => {
            println!("{}", report.line);
            if report.partial {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<RunReport> {
    match command {
        Command::ConvertGt(a) => cmd_convert_gt(a),
        Command::EvalDet(a) => cmd_eval_det(a),
        Command::EvalSeg(a) => cmd_eval_seg(a),
        Command::EvalCls(a) => cmd_eval_cls(a),
        Command::Augment(a) => cmd_augment(a),
        Command::Resize(a) => cmd_resize(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

/// Explicit value, then LESIONROI_WORKERS, then 0 (rayon's own default).
fn resolve_workers(cli_value: Option<usize>) -> Result<usize> {
    let requested = match cli_value {
        Some(n) => Some(n),
        None => match std::env::var("LESIONROI_WORKERS") {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                Error::InvalidParams(format!(
                    "LESIONROI_WORKERS must be a positive integer, got {v:?}"
                ))
            })?),
            Err(_) => None,
        },
    };
    match requested {
        Some(0) => Err(Error::InvalidParams(
            "worker count must be at least 1".into(),
        )),
        Some(n) => Ok(n),
        None => Ok(0),
    }
}

fn default_rejects_path(out: &Path) -> PathBuf {
    let name = out
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("output");
    out.with_file_name(format!(
        "{}.rejects.csv",
        name.strip_suffix(".csv").unwrap_or(name)
    ))
}

fn cmd_convert_gt(a: ConvertGtArgs) -> Result<RunReport> {
    let index = load_manifest(&a.manifest)?;
    let conv = dataset::convert_gt(&index, a.largest_component)?;
    dataset::write_gt_table(&a.out, &conv.rows)?;
    let rejects_path = a.rejects.unwrap_or_else(|| default_rejects_path(&a.out));
    dataset::write_rejects(&rejects_path, &conv.rejects)?;
    let status = if conv.rejects.is_empty() { "ok" } else { "partial" };
    Ok(RunReport::with_rejects(
        format!(
            "convert-gt status={status} converted={} rejected={} gt={} rejects={}",
            conv.rows.len(),
            conv.rejects.len(),
            a.out.display(),
            rejects_path.display()
        ),
        conv.rejects.len(),
    ))
}

/// Joins the manifest, ground-truth table, and detections into evaluation
/// items: every indexed image must have a ground-truth box, every id in
/// either file must be in the index, and images absent from the detections
/// file get an empty detection list.
fn build_eval_items(
    index: &DatasetIndex,
    gt_rows: &[(String, BBox)],
    dets: &DetectionsFile,
) -> Result<Vec<EvalItem>> {
    let gt_map: BTreeMap<&str, BBox> = gt_rows.iter().map(|(id, b)| (id.as_str(), *b)).collect();
    for (id, _) in gt_rows {
        if !index.contains(id) {
            return Err(Error::UnknownImageId(id.clone()));
        }
    }
    for id in dets.keys() {
        if !index.contains(id) {
            return Err(Error::UnknownImageId(id.clone()));
        }
    }
    index
        .entries()
        .iter()
        .map(|entry| {
            let gt = gt_map
                .get(entry.image_id.as_str())
                .copied()
                .ok_or_else(|| Error::MissingGroundTruth(entry.image_id.clone()))?;
            Ok(EvalItem {
                image_id: entry.image_id.clone(),
                gt,
                detections: dets.get(&entry.image_id).cloned().unwrap_or_default(),
            })
        })
        .collect()
}

fn cmd_eval_det(a: EvalDetArgs) -> Result<RunReport> {
    let index = load_manifest(&a.manifest)?;
    let gt_rows = dataset::read_gt_table(&a.gt)?;
    let dets = read_detections(&a.dets)?;
    let items = build_eval_items(&index, &gt_rows, &dets)?;
    let reports = threshold_sweep(&items, &a.iou, a.fn_mode.into())?;
    dataset::write_eval_report(&a.out, &reports)?;
    Ok(RunReport::ok(format!(
        "eval-det status=ok images={} thresholds={} report={}",
        items.len(),
        reports.len(),
        a.out.display()
    )))
}

fn cmd_sweep(a: SweepArgs) -> Result<RunReport> {
    let thresholds = build_grid(a.start, a.stop, a.step_size)?;
    let index = load_manifest(&a.manifest)?;
    let gt_rows = dataset::read_gt_table(&a.gt)?;
    let dets = read_detections(&a.dets)?;
    let items = build_eval_items(&index, &gt_rows, &dets)?;
    let reports = threshold_sweep(&items, &thresholds, a.fn_mode.into())?;
    dataset::write_curve(&a.out, &reports)?;
    Ok(RunReport::ok(format!(
        "sweep status=ok images={} points={} curve={}",
        items.len(),
        reports.len(),
        a.out.display()
    )))
}

/// Evenly spaced thresholds from `start` to `stop` inclusive.
fn build_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    let bad = |msg: String| Err(Error::InvalidThresholds(msg));
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return bad("grid parameters must be finite".into());
    }
    if start <= 0.0 || stop >= 1.0 || start > stop {
        return bad(format!(
            "grid must satisfy 0 < start <= stop < 1, got start={start} stop={stop}"
        ));
    }
    if step <= 0.0 {
        return bad(format!("step must be positive, got {step}"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

fn cmd_eval_seg(a: EvalSegArgs) -> Result<RunReport> {
    let index = load_manifest(&a.manifest)?;
    for entry in index.entries() {
        if entry.mask_path.is_none() {
            return Err(Error::MissingField {
                image_id: entry.image_id.clone(),
                field: "mask_path",
            });
        }
    }

    let results: Vec<(String, Result<ConfusionCounts>)> = index
        .entries()
        .par_iter()
        .map(|entry| {
            let counts = score_seg_entry(entry, &a.pred_dir);
            (entry.image_id.clone(), counts)
        })
        .collect();

    let mut scored: Vec<(String, ConfusionCounts)> = Vec::new();
    let mut rejects = Vec::new();
    for (image_id, result) in results {
        match result {
            Ok(c) => scored.push((image_id, c)),
            Err(e) => rejects.push(Reject {
                image_id,
                reason: e.to_string(),
            }),
        }
    }
    if scored.is_empty() {
        return Err(Error::InvalidParams(
            "no image could be scored; see the rejects".into(),
        ));
    }

    let (mode_name, summary) = match a.average {
        AverageArg::PerImage => {
            let per: Vec<SegMetrics> = scored
                .iter()
                .map(|(_, c)| seg_metrics(c))
                .collect::<Result<_>>()?;
            ("per-image", mean_seg_metrics(&per))
        }
        AverageArg::Pooled => {
            let total = scored
                .iter()
                .fold(ConfusionCounts::default(), |acc, (_, c)| acc + *c);
            ("pooled", seg_metrics(&total)?)
        }
    };

    dataset::write_seg_report(&a.out, mode_name, scored.len() as u64, &summary)?;
    if let Some(per_image_path) = &a.per_image {
        let rows: Vec<(String, SegMetrics)> = scored
            .iter()
            .map(|(id, c)| Ok((id.clone(), seg_metrics(c)?)))
            .collect::<Result<_>>()?;
        dataset::write_seg_per_image(per_image_path, &rows)?;
    }
    let rejects_path = a.rejects.unwrap_or_else(|| default_rejects_path(&a.out));
    dataset::write_rejects(&rejects_path, &rejects)?;

    let status = if rejects.is_empty() { "ok" } else { "partial" };
    Ok(RunReport::with_rejects(
        format!(
            "eval-seg status={status} scored={} rejected={} average={mode_name} report={}",
            scored.len(),
            rejects.len(),
            a.out.display()
        ),
        rejects.len(),
    ))
}

fn score_seg_entry(entry: &DatasetEntry, pred_dir: &Path) -> Result<ConfusionCounts> {
    let gt = dataset::load_mask(entry.mask_path.as_ref().unwrap())?;
    let pred_path = pred_dir.join(format!("{}.png", entry.image_id));
    if !pred_path.is_file() {
        return Err(Error::DanglingPath(pred_path));
    }
    let pred = dataset::load_mask(&pred_path)?;
    seg_confusion(&pred, &gt)
}

/// Arithmetic mean of per-image metrics; degenerate when any image was.
fn mean_seg_metrics(per: &[SegMetrics]) -> SegMetrics {
    let n = per.len() as f64;
    SegMetrics {
        accuracy: per.iter().map(|m| m.accuracy).sum::<f64>() / n,
        dice: per.iter().map(|m| m.dice).sum::<f64>() / n,
        jaccard: per.iter().map(|m| m.jaccard).sum::<f64>() / n,
        sensitivity: per.iter().map(|m| m.sensitivity).sum::<f64>() / n,
        specificity: per.iter().map(|m| m.specificity).sum::<f64>() / n,
        degenerate: per.iter().any(|m| m.degenerate),
    }
}

fn cmd_eval_cls(a: EvalClsArgs) -> Result<RunReport> {
    let index = load_manifest(&a.manifest)?;
    let preds = dataset::read_label_csv(&a.pred)?;
    let pred_map: BTreeMap<&str, dataset::Label> =
        preds.iter().map(|(id, l)| (id.as_str(), *l)).collect();
    for (id, _) in &preds {
        if !index.contains(id) {
            return Err(Error::UnknownImageId(id.clone()));
        }
    }

    // Malignant is the positive class.
    let mut counts = ConfusionCounts::default();
    for entry in index.entries() {
        let gt = entry.label.ok_or_else(|| Error::MissingField {
            image_id: entry.image_id.clone(),
            field: "label",
        })?;
        let pred = pred_map
            .get(entry.image_id.as_str())
            .copied()
            .ok_or_else(|| Error::MissingField {
                image_id: entry.image_id.clone(),
                field: "prediction",
            })?;
        use dataset::Label::{Benign, Malignant};
        match (pred, gt) {
            (Malignant, Malignant) => counts.true_pos += 1,
            (Malignant, Benign) => counts.false_pos += 1,
            (Benign, Malignant) => counts.false_neg += 1,
            (Benign, Benign) => counts.true_neg += 1,
        }
    }

    let m = cls_metrics(&counts)?;
    dataset::write_cls_report(&a.out, counts.total(), &m)?;
    Ok(RunReport::ok(format!(
        "eval-cls status=ok samples={} report={}",
        counts.total(),
        a.out.display()
    )))
}

fn cmd_augment(a: AugmentArgs) -> Result<RunReport> {
    let params = AugmentParams {
        target_side: a.target,
        margin: a.margin,
        step: a.step,
        terminal_slack: a.terminal_slack,
        rotations: a
            .rotations
            .iter()
            .map(|&d| QuarterTurn::from_degrees(d))
            .collect::<Result<_>>()?,
    };
    params.validate()?;

    let index = load_manifest(&a.manifest)?;
    let dets = match a.roi_source {
        RoiSourceArg::Mask => {
            for entry in index.entries() {
                if entry.mask_path.is_none() {
                    return Err(Error::MissingField {
                        image_id: entry.image_id.clone(),
                        field: "mask_path",
                    });
                }
            }
            None
        }
        RoiSourceArg::Dets => {
            let path = a.dets.as_ref().ok_or_else(|| {
                Error::InvalidParams("--dets is required with --roi-source dets".into())
            })?;
            let d = read_detections(path)?;
            for id in d.keys() {
                if !index.contains(id) {
                    return Err(Error::UnknownImageId(id.clone()));
                }
            }
            Some(d)
        }
    };

    let images_dir = a.out.join("images");
    std::fs::create_dir_all(&images_dir).map_err(|e| Error::io(&images_dir, e))?;
    if index.entries().iter().any(|e| e.mask_path.is_some()) {
        let masks_dir = a.out.join("masks");
        std::fs::create_dir_all(&masks_dir).map_err(|e| Error::io(&masks_dir, e))?;
    }

    let results: Vec<std::result::Result<Vec<dataset::AugmentedRow>, Reject>> = index
        .entries()
        .par_iter()
        .map(|entry| {
            augment_one(entry, dets.as_ref(), &params, a.largest_component, &a.out).map_err(|e| {
                Reject {
                    image_id: entry.image_id.clone(),
                    reason: e.to_string(),
                }
            })
        })
        .collect();

    let mut rows = Vec::new();
    let mut rejects = Vec::new();
    for result in results {
        match result {
            Ok(mut r) => rows.append(&mut r),
            Err(reject) => rejects.push(reject),
        }
    }

    dataset::write_augmented_index(&a.out, &rows)?;
    dataset::write_rejects(&a.out.join("rejects.csv"), &rejects)?;

    let status = if rejects.is_empty() { "ok" } else { "partial" };
    Ok(RunReport::with_rejects(
        format!(
            "augment status={status} images={} outputs={} rejected={} out={}",
            index.len() - rejects.len(),
            rows.len(),
            rejects.len(),
            a.out.display()
        ),
        rejects.len(),
    ))
}

/// Full augmentation of one dataset entry: derive the ROI, plan the crops,
/// apply them to the image and mask in lockstep, and write every output.
fn augment_one(
    entry: &DatasetEntry,
    dets: Option<&DetectionsFile>,
    params: &AugmentParams,
    largest_component: bool,
    out_dir: &Path,
) -> Result<Vec<dataset::AugmentedRow>> {
    let image = dataset::load_rgb(&entry.image_path)?;
    let mask = entry
        .mask_path
        .as_ref()
        .map(|p| dataset::load_mask(p))
        .transpose()?;

    let roi = match dets {
        None => {
            // Presence of the mask was checked before the batch started.
            let mask = mask.as_ref().unwrap();
            let shaped = if largest_component {
                mask.largest_component()?
            } else {
                mask.clone()
            };
            shaped.circumscribe()?
        }
        Some(d) => {
            let list = d
                .get(&entry.image_id)
                .map(Vec::as_slice)
                .unwrap_or_default();
            *select_primary(list)?.bbox()
        }
    };

    let plan = plan(
        &entry.image_id,
        image.width(),
        image.height(),
        &roi,
        params,
    )?;
    let samples = apply_plan(&image, mask.as_ref(), &plan, params)?;
    let ext = dataset::ImageExt::from_path(&entry.image_path);
    samples
        .into_iter()
        .map(|s| {
            dataset::write_augmented_sample(
                out_dir,
                &AugmentedOutput {
                    out_id: s.record.out_id.clone(),
                    image: s.image,
                    mask: s.mask,
                    label: entry.label,
                    ext,
                },
            )
        })
        .collect()
}

fn cmd_resize(a: ResizeArgs) -> Result<RunReport> {
    if a.width == 0 || a.height == 0 {
        return Err(Error::InvalidParams(format!(
            "resize target must be nonzero, got {}x{}",
            a.width, a.height
        )));
    }
    let index = load_manifest(&a.manifest)?;

    let images_dir = a.out.join("images");
    std::fs::create_dir_all(&images_dir).map_err(|e| Error::io(&images_dir, e))?;
    if index.entries().iter().any(|e| e.mask_path.is_some()) {
        let masks_dir = a.out.join("masks");
        std::fs::create_dir_all(&masks_dir).map_err(|e| Error::io(&masks_dir, e))?;
    }

    let results: Vec<std::result::Result<dataset::ManifestRow, Reject>> = index
        .entries()
        .par_iter()
        .map(|entry| {
            resize_one(entry, a.width, a.height, &a.out).map_err(|e| Reject {
                image_id: entry.image_id.clone(),
                reason: e.to_string(),
            })
        })
        .collect();

    let mut rows = Vec::new();
    let mut rejects = Vec::new();
    for result in results {
        match result {
            Ok(row) => rows.push(row),
            Err(reject) => rejects.push(reject),
        }
    }
    dataset::write_manifest(&a.out.join("manifest.csv"), &rows)?;
    dataset::write_rejects(&a.out.join("rejects.csv"), &rejects)?;

    let status = if rejects.is_empty() { "ok" } else { "partial" };
    Ok(RunReport::with_rejects(
        format!(
            "resize status={status} resized={} rejected={} out={}",
            rows.len(),
            rejects.len(),
            a.out.display()
        ),
        rejects.len(),
    ))
}

fn resize_one(
    entry: &DatasetEntry,
    width: u32,
    height: u32,
    out_dir: &Path,
) -> Result<dataset::ManifestRow> {
    let image = dataset::load_rgb(&entry.image_path)?;
    let resized = resize_bilinear(&image, width, height)?;
    let ext = dataset::ImageExt::from_path(&entry.image_path);
    let image_rel = format!("images/{}.{}", entry.image_id, ext.as_str());
    dataset::save_rgb(&out_dir.join(&image_rel), &resized)?;

    let mut mask_rel = None;
    if let Some(mask_path) = &entry.mask_path {
        let mask = dataset::load_mask(mask_path)?.resized(width, height)?;
        let rel = format!("masks/{}.png", entry.image_id);
        dataset::save_mask_png(&out_dir.join(&rel), &mask)?;
        mask_rel = Some(rel);
    }
    Ok(dataset::ManifestRow {
        image_id: entry.image_id.clone(),
        image_path: image_rel,
        mask_path: mask_rel,
        label: entry.label,
    })
}

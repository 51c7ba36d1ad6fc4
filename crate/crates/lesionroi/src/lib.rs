//! Dermoscopic lesion ROI toolkit.
//!
//! Everything a skin-lesion dataset pipeline needs between "I have images
//! and segmentation masks" and "I have a trained detector": tight
//! bounding-box ground truth derived from masks, rank-based matching of
//! detection boxes against that ground truth, pixel confusion metrics for
//! segmentation and classification, and an ROI-centered augmentation that
//! cuts magnification ladders and quarter turns from each image and its
//! mask in lockstep.
//!
//! The crate is organized by stage:
//!
//! * [`geometry`]: integer boxes, IoU, quarter turns, window clamping.
//! * [`mask`]: binary masks, tight boxes, connected components.
//! * [`eval`]: detection matching and precision/recall sweeps.
//! * [`metrics`]: confusion counts and the derived scores.
//! * [`raster`]: crop, rotate, and resize for RGB images.
//! * [`augment`]: magnification ladder planning and application.
//! * [`dataset`]: manifests, detections, tables, reports, output layout.
//! * [`cli`]: the batch subcommands built from all of the above.
//!
//! The `examples/` directory shows one runnable program per capability;
//! `lesionroi --help` lists the batch interface.

pub mod augment;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod mask;
pub mod metrics;
pub mod raster;

pub use augment::{apply_plan, plan, AugmentParams, AugmentationPlan, AugmentedSample, PlanRecord};
pub use error::{Error, Result};
pub use eval::{
    evaluate, match_image, select_primary, threshold_sweep, Detection, EvalItem, EvalReport,
    FnMode, ImageOutcome,
};
pub use geometry::{clamp_window, BBox, QuarterTurn};
pub use mask::{BinaryMask, FOREGROUND_THRESHOLD};
pub use metrics::{cls_metrics, seg_confusion, seg_metrics, ClsMetrics, ConfusionCounts, SegMetrics};
pub use raster::{crop_rgb, resize_bilinear, rotate_rgb};

//! Error type shared across the crate.

use std::fmt;
use std::path::PathBuf;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All the ways a toolkit operation can fail.
///
/// Per-item problems that a batch run should survive (an undecodable mask,
/// an image with no foreground) and configuration problems that should stop
/// a run before it starts (duplicate ids, dangling paths) are distinct
/// variants so callers can tell them apart.
#[derive(Debug)]
pub enum Error {
    /// Box coordinates violate `0 <= min < max` on either axis.
    InvalidBox {
        x_min: i64,
        y_min: i64,
        x_max: i64,
        y_max: i64,
    },
    /// A box or window does not lie inside the frame it was used with.
    OutOfFrame {
        x_min: i64,
        y_min: i64,
        x_max: i64,
        y_max: i64,
        width: u32,
        height: u32,
    },
    /// A square window side exceeds one of the frame dimensions.
    WindowTooLarge { side: u32, width: u32, height: u32 },
    /// The mask has no foreground pixel, so no box can be derived.
    NoForeground,
    /// Two rasters that must share dimensions do not.
    DimensionMismatch {
        expected: (u32, u32),
        actual: (u32, u32),
    },
    /// An operation that needs at least one detection got none.
    NoDetections,
    /// A detection confidence is outside `[0, 1]` or not finite.
    InvalidScore(f64),
    /// An IoU threshold list is empty, out of `(0, 1)`, or not increasing.
    InvalidThresholds(String),
    /// A confusion table with zero total count has no defined metrics.
    EmptyCounts,
    /// The frame is too small to cut a window of the configured output side.
    FrameTooSmall {
        width: u32,
        height: u32,
        target_side: u32,
    },
    /// An augmentation or CLI parameter failed validation.
    InvalidParams(String),
    /// The same image id appears more than once in one input.
    DuplicateImageId(String),
    /// An image id refers to nothing in the dataset index.
    UnknownImageId(String),
    /// No ground-truth box is available for an indexed image.
    MissingGroundTruth(String),
    /// A dataset entry lacks a field the operation requires.
    MissingField { image_id: String, field: &'static str },
    /// A path referenced by the manifest does not exist on disk.
    DanglingPath(PathBuf),
    /// The manifest file itself is malformed.
    ManifestParse { path: PathBuf, msg: String },
    /// A detections line is not valid structured text.
    DetectionsParse { line: usize, msg: String },
    /// A detections line parsed but carries an invalid box or score.
    InvalidDetection { line: usize, msg: String },
    /// A raster file could not be decoded.
    ImageDecode { path: PathBuf, msg: String },
    /// A raster could not be encoded for writing.
    ImageEncode { path: PathBuf, msg: String },
    /// A filesystem operation failed.
    Io { path: PathBuf, source: std::io::Error },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidBox {
                x_min,
                y_min,
                x_max,
                y_max,
            } => write!(
                f,
                "invalid box ({x_min}, {y_min}, {x_max}, {y_max}): \
                 coordinates must satisfy 0 <= min < max per axis"
            ),
            Error::OutOfFrame {
                x_min,
                y_min,
                x_max,
                y_max,
                width,
                height,
            } => write!(
                f,
                "box ({x_min}, {y_min}, {x_max}, {y_max}) does not fit \
                 inside a {width}x{height} frame"
            ),
            Error::WindowTooLarge {
                side,
                width,
                height,
            } => write!(
                f,
                "window side {side} exceeds frame dimensions {width}x{height}"
            ),
            Error::NoForeground => write!(f, "mask contains no foreground pixels"),
            Error::DimensionMismatch { expected, actual } => write!(
                f,
                "dimension mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, actual.0, actual.1
            ),
            Error::NoDetections => write!(f, "detection list is empty"),
            Error::InvalidScore(s) => {
                write!(f, "confidence score {s} is outside [0, 1]")
            }
            Error::InvalidThresholds(msg) => write!(f, "invalid thresholds: {msg}"),
            Error::EmptyCounts => write!(f, "confusion counts sum to zero"),
            Error::FrameTooSmall {
                width,
                height,
                target_side,
            } => write!(
                f,
                "frame {width}x{height} is smaller than the {target_side}px \
                 output side; refusing to upsample"
            ),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::DuplicateImageId(id) => write!(f, "duplicate image id {id:?}"),
            Error::UnknownImageId(id) => {
                write!(f, "image id {id:?} is not in the dataset index")
            }
            Error::MissingGroundTruth(id) => {
                write!(f, "no ground-truth box for image id {id:?}")
            }
            Error::MissingField { image_id, field } => {
                write!(f, "dataset entry {image_id:?} has no {field}")
            }
            Error::DanglingPath(p) => {
                write!(f, "referenced path does not exist: {}", p.display())
            }
            Error::ManifestParse { path, msg } => {
                write!(f, "malformed manifest {}: {msg}", path.display())
            }
            Error::DetectionsParse { line, msg } => {
                write!(f, "detections line {line}: parse error: {msg}")
            }
            Error::InvalidDetection { line, msg } => {
                write!(f, "detections line {line}: {msg}")
            }
            Error::ImageDecode { path, msg } => {
                write!(f, "cannot decode {}: {msg}", path.display())
            }
            Error::ImageEncode { path, msg } => {
                write!(f, "cannot encode {}: {msg}", path.display())
            }
            Error::Io { path, source } => {
                write!(f, "io error on {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl Error {
    /// Wraps an io error with the path it occurred on.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

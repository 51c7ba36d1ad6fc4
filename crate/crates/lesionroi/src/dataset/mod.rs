//! Dataset files: the CSV manifest that indexes a dataset, raster loading
//! and saving, and the derived artifacts (ground-truth tables, detection
//! files, reports, augmented outputs) handled by the submodules.
//!
//! Everything here is deterministic: indexes are sorted by image id,
//! writers emit rows in sorted order, and files are written atomically via
//! a sibling temp file so a failed run never leaves a half-written artifact
//! behind.

mod augmented;
mod detections;
mod gt;
mod reports;

pub use augmented::{
    write_augmented_index, write_augmented_sample, AugmentedOutput, AugmentedRow, ImageExt,
};
pub use detections::{read_detections, write_detections, DetectionsFile};
pub use gt::{convert_gt, read_gt_table, write_gt_table, GtConversion, Reject};
pub use reports::{
    write_cls_report, write_curve, write_eval_report, write_rejects, write_seg_per_image,
    write_seg_report,
};

use std::collections::BTreeSet;
use std::fmt;
use std::io::Cursor;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use image::{DynamicImage, ImageFormat, RgbImage};

use crate::error::{Error, Result};
use crate::mask::BinaryMask;

/// Diagnosis label carried by a manifest entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Benign,
    Malignant,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Benign => "benign",
            Label::Malignant => "malignant",
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "benign" => Ok(Label::Benign),
            "malignant" => Ok(Label::Malignant),
            other => Err(Error::InvalidParams(format!(
                "label must be \"benign\" or \"malignant\", got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One manifest row with its paths resolved against the manifest location.
#[derive(Clone, Debug)]
pub struct DatasetEntry {
    pub image_id: String,
    pub image_path: PathBuf,
    pub mask_path: Option<PathBuf>,
    pub label: Option<Label>,
}

/// Validated, id-sorted view of a manifest.
#[derive(Clone, Debug, Default)]
pub struct DatasetIndex {
    entries: Vec<DatasetEntry>,
}

impl DatasetIndex {
    pub fn entries(&self) -> &[DatasetEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, image_id: &str) -> bool {
        self.entries
            .binary_search_by(|e| e.image_id.as_str().cmp(image_id))
            .is_ok()
    }

    pub fn get(&self, image_id: &str) -> Option<&DatasetEntry> {
        self.entries
            .binary_search_by(|e| e.image_id.as_str().cmp(image_id))
            .ok()
            .map(|i| &self.entries[i])
    }
}

const MANIFEST_HEADER: [&str; 4] = ["image_id", "image_path", "mask_path", "label"];
const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

fn manifest_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::ManifestParse {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

fn has_extension(path: &Path, allowed: &[&str]) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| allowed.iter().any(|a| e.eq_ignore_ascii_case(a)))
        .unwrap_or(false)
}

/// Reads and validates a dataset manifest.
///
/// The manifest is UTF-8 CSV with the exact header
/// `image_id,image_path,mask_path,label`; `mask_path` and `label` may be
/// empty. Relative paths are resolved against the manifest's directory.
/// Image ids must be unique, every referenced file must exist, masks must
/// be PNG, and images must be PNG or JPEG. Entries come back sorted by id,
/// so downstream output order never depends on manifest order.
pub fn load_manifest(path: &Path) -> Result<DatasetIndex> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| manifest_err(path, e.to_string()))?;

    let headers = reader
        .headers()
        .map_err(|e| manifest_err(path, e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != MANIFEST_HEADER {
        return Err(manifest_err(
            path,
            format!(
                "header must be {:?}, got {:?}",
                MANIFEST_HEADER.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut entries = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| manifest_err(path, e.to_string()))?;
        let row = i + 2; // 1-based, after the header line
        if record.len() != 4 {
            return Err(manifest_err(
                path,
                format!("row {row}: expected 4 fields, got {}", record.len()),
            ));
        }
        let image_id = record[0].to_string();
        if image_id.is_empty() {
            return Err(manifest_err(path, format!("row {row}: empty image_id")));
        }
        if !seen.insert(image_id.clone()) {
            return Err(Error::DuplicateImageId(image_id));
        }
        if record[1].is_empty() {
            return Err(manifest_err(path, format!("row {row}: empty image_path")));
        }

        let image_path = base.join(&record[1]);
        if !image_path.is_file() {
            return Err(Error::DanglingPath(image_path));
        }
        if !has_extension(&image_path, &IMAGE_EXTENSIONS) {
            return Err(manifest_err(
                path,
                format!("row {row}: image_path must end in .png, .jpg, or .jpeg"),
            ));
        }

        let mask_path = if record[2].is_empty() {
            None
        } else {
            let p = base.join(&record[2]);
            if !p.is_file() {
                return Err(Error::DanglingPath(p));
            }
            if !has_extension(&p, &["png"]) {
                return Err(manifest_err(
                    path,
                    format!("row {row}: mask_path must be a lossless .png"),
                ));
            }
            Some(p)
        };

        let label = if record[3].is_empty() {
            None
        } else {
            Some(record[3].parse::<Label>()?)
        };

        entries.push(DatasetEntry {
            image_id,
            image_path,
            mask_path,
            label,
        });
    }
    entries.sort_by(|a, b| a.image_id.cmp(&b.image_id));
    Ok(DatasetIndex { entries })
}

/// One row of a manifest about to be written; paths are stored verbatim.
#[derive(Clone, Debug)]
pub struct ManifestRow {
    pub image_id: String,
    pub image_path: String,
    pub mask_path: Option<String>,
    pub label: Option<Label>,
}

/// Writes a manifest with rows sorted by image id.
pub fn write_manifest(path: &Path, rows: &[ManifestRow]) -> Result<()> {
    let mut sorted: Vec<&ManifestRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.image_id.cmp(&b.image_id));

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(MANIFEST_HEADER)
        .map_err(|e| manifest_err(path, e.to_string()))?;
    for row in sorted {
        w.write_record([
            row.image_id.as_str(),
            row.image_path.as_str(),
            row.mask_path.as_deref().unwrap_or(""),
            row.label.map(Label::as_str).unwrap_or(""),
        ])
        .map_err(|e| manifest_err(path, e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| manifest_err(path, e.to_string()))?;
    write_atomic(path, &bytes)
}

/// Decodes an image file to RGB.
pub fn load_rgb(path: &Path) -> Result<RgbImage> {
    let img = image::open(path).map_err(|e| Error::ImageDecode {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    Ok(img.to_rgb8())
}

/// Decodes a mask file to a binary mask: the image is flattened to 8-bit
/// grayscale and thresholded at [`crate::mask::FOREGROUND_THRESHOLD`].
pub fn load_mask(path: &Path) -> Result<BinaryMask> {
    let img = image::open(path).map_err(|e| Error::ImageDecode {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    let gray = img.to_luma8();
    BinaryMask::from_gray8(gray.as_raw(), gray.width(), gray.height())
}

/// Encodes and writes an RGB image; the format follows the path extension
/// (`.png`, `.jpg`, or `.jpeg`).
pub fn save_rgb(path: &Path, img: &RgbImage) -> Result<()> {
    let format = if has_extension(path, &["jpg", "jpeg"]) {
        ImageFormat::Jpeg
    } else {
        ImageFormat::Png
    };
    let mut buf = Cursor::new(Vec::new());
    DynamicImage::ImageRgb8(img.clone())
        .write_to(&mut buf, format)
        .map_err(|e| Error::ImageEncode {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
    write_atomic(path, buf.get_ref())
}

/// Writes a binary mask as an 8-bit grayscale PNG (0 or 255).
pub fn save_mask_png(path: &Path, mask: &BinaryMask) -> Result<()> {
    let gray = image::GrayImage::from_raw(mask.width(), mask.height(), mask.to_gray8())
        .expect("buffer length matches mask dimensions");
    let mut buf = Cursor::new(Vec::new());
    DynamicImage::ImageLuma8(gray)
        .write_to(&mut buf, ImageFormat::Png)
        .map_err(|e| Error::ImageEncode {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
    write_atomic(path, buf.get_ref())
}

/// Writes `bytes` to a sibling temp file and renames it into place, so the
/// target path either keeps its old content or gets the complete new one.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Error::InvalidParams(format!("bad output path {}", path.display())))?;
    let tmp = path.with_file_name(format!("{file_name}.tmp"));
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

/// Reads a two-column `image_id,label` prediction file into a sorted map.
pub fn read_label_csv(path: &Path) -> Result<Vec<(String, Label)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| manifest_err(path, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| manifest_err(path, e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != ["image_id", "label"] {
        return Err(manifest_err(path, "header must be image_id,label"));
    }
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| manifest_err(path, e.to_string()))?;
        let id = record[0].to_string();
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateImageId(id));
        }
        rows.push((id, record[1].parse::<Label>()?));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::Rgb;
    use tempfile::TempDir;

    pub(crate) fn write_png(path: &Path, width: u32, height: u32) {
        let img = RgbImage::from_pixel(width, height, Rgb([10, 20, 30]));
        save_rgb(path, &img).unwrap();
    }

    pub(crate) fn write_mask_png(path: &Path, width: u32, height: u32, fg: &[(u32, u32)]) {
        let mut m = BinaryMask::filled(width, height, false).unwrap();
        for &(x, y) in fg {
            m.set(x, y, true);
        }
        save_mask_png(path, &m).unwrap();
    }

    fn write_file(path: &Path, content: &str) {
        std::fs::write(path, content).unwrap();
    }

    #[test]
    fn manifest_round_trip() {
        let dir = TempDir::new().unwrap();
        write_png(&dir.path().join("a.png"), 8, 8);
        write_png(&dir.path().join("b.jpg"), 8, 8);
        write_mask_png(&dir.path().join("a_mask.png"), 8, 8, &[(1, 1)]);

        let manifest = dir.path().join("manifest.csv");
        write_file(
            &manifest,
            "image_id,image_path,mask_path,label\n\
             b,b.jpg,,\n\
             a,a.png,a_mask.png,malignant\n",
        );
        let index = load_manifest(&manifest).unwrap();
        assert_eq!(index.len(), 2);
        // Sorted by id regardless of file order.
        assert_eq!(index.entries()[0].image_id, "a");
        assert_eq!(index.entries()[0].label, Some(Label::Malignant));
        assert!(index.entries()[0].mask_path.is_some());
        assert_eq!(index.entries()[1].image_id, "b");
        assert_eq!(index.entries()[1].label, None);
        assert!(index.contains("a"));
        assert!(!index.contains("z"));
    }

    #[test]
    fn manifest_header_only_is_empty_index() {
        let dir = TempDir::new().unwrap();
        let manifest = dir.path().join("manifest.csv");
        write_file(&manifest, "image_id,image_path,mask_path,label\n");
        assert!(load_manifest(&manifest).unwrap().is_empty());
    }

    #[test]
    fn manifest_rejects_bad_header() {
        let dir = TempDir::new().unwrap();
        let manifest = dir.path().join("manifest.csv");
        write_file(&manifest, "id,path\nx,y\n");
        assert!(matches!(
            load_manifest(&manifest),
            Err(Error::ManifestParse { .. })
        ));
    }

    #[test]
    fn manifest_rejects_duplicate_ids() {
        let dir = TempDir::new().unwrap();
        write_png(&dir.path().join("a.png"), 4, 4);
        let manifest = dir.path().join("manifest.csv");
        write_file(
            &manifest,
            "image_id,image_path,mask_path,label\na,a.png,,\na,a.png,,\n",
        );
        assert!(matches!(
            load_manifest(&manifest),
            Err(Error::DuplicateImageId(id)) if id == "a"
        ));
    }

    #[test]
    fn manifest_rejects_dangling_paths() {
        let dir = TempDir::new().unwrap();
        let manifest = dir.path().join("manifest.csv");
        write_file(
            &manifest,
            "image_id,image_path,mask_path,label\na,missing.png,,\n",
        );
        assert!(matches!(
            load_manifest(&manifest),
            Err(Error::DanglingPath(_))
        ));
    }

    #[test]
    fn manifest_rejects_lossy_mask_format() {
        let dir = TempDir::new().unwrap();
        write_png(&dir.path().join("a.png"), 4, 4);
        write_png(&dir.path().join("m.jpg"), 4, 4);
        let manifest = dir.path().join("manifest.csv");
        write_file(
            &manifest,
            "image_id,image_path,mask_path,label\na,a.png,m.jpg,\n",
        );
        assert!(matches!(
            load_manifest(&manifest),
            Err(Error::ManifestParse { .. })
        ));
    }

    #[test]
    fn manifest_rejects_unknown_label() {
        let dir = TempDir::new().unwrap();
        write_png(&dir.path().join("a.png"), 4, 4);
        let manifest = dir.path().join("manifest.csv");
        write_file(
            &manifest,
            "image_id,image_path,mask_path,label\na,a.png,,weird\n",
        );
        assert!(load_manifest(&manifest).is_err());
    }

    #[test]
    fn saved_rasters_load_back() {
        let dir = TempDir::new().unwrap();
        let img_path = dir.path().join("img.png");
        let img = RgbImage::from_fn(9, 7, |x, y| Rgb([x as u8, y as u8, 99]));
        save_rgb(&img_path, &img).unwrap();
        assert_eq!(load_rgb(&img_path).unwrap(), img);

        let mask_path = dir.path().join("m.png");
        let mut m = BinaryMask::filled(9, 7, false).unwrap();
        m.set(3, 2, true);
        save_mask_png(&mask_path, &m).unwrap();
        assert_eq!(load_mask(&mask_path).unwrap(), m);
    }

    #[test]
    fn label_csv_round_trip() {
        let dir = TempDir::new().unwrap();
        let p = dir.path().join("preds.csv");
        write_file(&p, "image_id,label\nb,benign\na,malignant\n");
        let rows = read_label_csv(&p).unwrap();
        assert_eq!(
            rows,
            vec![
                ("a".to_string(), Label::Malignant),
                ("b".to_string(), Label::Benign)
            ]
        );
    }
}

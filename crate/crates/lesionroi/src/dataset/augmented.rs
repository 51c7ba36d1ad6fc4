//! Writer for augmented datasets.
//!
//! Layout under the output directory:
//!
//! ```text
//! out/
//!   images/{out_id}.png|jpg    augmented crops
//!   masks/{out_id}.png         lockstep masks, when sources have masks
//!   manifest.csv               index of the augmented set
//!   gt.csv                     boxes recomputed from the augmented masks
//! ```
//!
//! Output paths are fully determined by the out id, so parallel workers
//! each own their files and never contend.

use std::path::Path;

use image::RgbImage;

use crate::error::Result;
use crate::geometry::BBox;
use crate::mask::BinaryMask;

use super::{save_mask_png, save_rgb, write_gt_table, write_manifest, Label, ManifestRow};

/// Image container format for an augmented crop, mirroring its source.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageExt {
    Png,
    Jpg,
}

impl ImageExt {
    /// Follows the source file's extension; anything not JPEG becomes PNG.
    pub fn from_path(path: &Path) -> ImageExt {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("jpg") || e.eq_ignore_ascii_case("jpeg") => {
                ImageExt::Jpg
            }
            _ => ImageExt::Png,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ImageExt::Png => "png",
            ImageExt::Jpg => "jpg",
        }
    }
}

/// One augmented crop ready to be written.
#[derive(Clone, Debug)]
pub struct AugmentedOutput {
    pub out_id: String,
    pub image: RgbImage,
    pub mask: Option<BinaryMask>,
    pub label: Option<Label>,
    pub ext: ImageExt,
}

/// Index entry produced by [`write_augmented_sample`].
#[derive(Clone, Debug)]
pub struct AugmentedRow {
    pub image_id: String,
    pub image_rel: String,
    pub mask_rel: Option<String>,
    pub label: Option<Label>,
    /// Tight box of the augmented mask; absent when there is no mask or
    /// the crop left no foreground.
    pub gt: Option<BBox>,
}

/// Writes one augmented sample's raster files and returns its index row.
/// `out_dir/images` (and `out_dir/masks` when masks are present) must
/// already exist.
pub fn write_augmented_sample(out_dir: &Path, sample: &AugmentedOutput) -> Result<AugmentedRow> {
    let image_rel = format!("images/{}.{}", sample.out_id, sample.ext.as_str());
    save_rgb(&out_dir.join(&image_rel), &sample.image)?;

    let mut mask_rel = None;
    let mut gt = None;
    if let Some(mask) = &sample.mask {
        let rel = format!("masks/{}.png", sample.out_id);
        save_mask_png(&out_dir.join(&rel), mask)?;
        gt = mask.circumscribe().ok();
        mask_rel = Some(rel);
    }

    Ok(AugmentedRow {
        image_id: sample.out_id.clone(),
        image_rel,
        mask_rel,
        label: sample.label,
        gt,
    })
}

/// Writes the augmented set's `manifest.csv` and, when any row carries a
/// box, the regenerated `gt.csv`. Rows are sorted by id.
pub fn write_augmented_index(out_dir: &Path, rows: &[AugmentedRow]) -> Result<()> {
    let manifest_rows: Vec<ManifestRow> = rows
        .iter()
        .map(|r| ManifestRow {
            image_id: r.image_id.clone(),
            image_path: r.image_rel.clone(),
            mask_path: r.mask_rel.clone(),
            label: r.label,
        })
        .collect();
    write_manifest(&out_dir.join("manifest.csv"), &manifest_rows)?;

    let gt_rows: Vec<(String, BBox)> = rows
        .iter()
        .filter_map(|r| r.gt.map(|b| (r.image_id.clone(), b)))
        .collect();
    if !gt_rows.is_empty() {
        write_gt_table(&out_dir.join("gt.csv"), &gt_rows)?;
    }
    Ok(())
}

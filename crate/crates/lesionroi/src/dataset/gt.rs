//! Ground-truth box tables and the mask-to-box conversion that produces
//! them.

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::BBox;

use super::{load_mask, write_atomic, DatasetIndex};

const GT_HEADER: [&str; 5] = ["image_id", "x_min", "y_min", "x_max", "y_max"];

/// A per-image failure recorded instead of aborting a batch run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reject {
    pub image_id: String,
    pub reason: String,
}

/// Outcome of a mask-to-box conversion over a dataset.
#[derive(Clone, Debug, Default)]
pub struct GtConversion {
    /// `(image_id, box)` rows sorted by id.
    pub rows: Vec<(String, BBox)>,
    /// Images that produced no box, sorted by id.
    pub rejects: Vec<Reject>,
}

/// Converts every mask in the index to its tight ROI bounding box.
///
/// With `largest_component` set, only the biggest 4-connected foreground
/// blob is boxed; otherwise the box spans all foreground pixels. Entries
/// whose mask fails to decode or holds no foreground become [`Reject`]s and
/// the conversion continues; an entry with no mask path at all is a
/// configuration error that stops the run. The function is deterministic
/// and idempotent for a fixed dataset.
pub fn convert_gt(index: &DatasetIndex, largest_component: bool) -> Result<GtConversion> {
    for entry in index.entries() {
        if entry.mask_path.is_none() {
            return Err(Error::MissingField {
                image_id: entry.image_id.clone(),
                field: "mask_path",
            });
        }
    }

    let results: Vec<(String, std::result::Result<BBox, String>)> = index
        .entries()
        .par_iter()
        .map(|entry| {
            let path = entry.mask_path.as_ref().unwrap();
            let boxed = load_mask(path).and_then(|mask| {
                let mask = if largest_component {
                    mask.largest_component()?
                } else {
                    mask
                };
                mask.circumscribe()
            });
            (entry.image_id.clone(), boxed.map_err(|e| e.to_string()))
        })
        .collect();

    let mut conversion = GtConversion::default();
    for (image_id, result) in results {
        match result {
            Ok(bbox) => conversion.rows.push((image_id, bbox)),
            Err(reason) => conversion.rejects.push(Reject { image_id, reason }),
        }
    }
    // The index is id-sorted, so both lists already are too.
    Ok(conversion)
}

/// Writes an `image_id,x_min,y_min,x_max,y_max` table sorted by id.
pub fn write_gt_table(path: &Path, rows: &[(String, BBox)]) -> Result<()> {
    let mut sorted: Vec<&(String, BBox)> = rows.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));

    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::ManifestParse {
        path: path.to_path_buf(),
        msg: e.to_string(),
    };
    w.write_record(GT_HEADER).map_err(io_err)?;
    for (id, b) in sorted {
        w.write_record([
            id.as_str(),
            &b.x_min().to_string(),
            &b.y_min().to_string(),
            &b.x_max().to_string(),
            &b.y_max().to_string(),
        ])
        .map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::ManifestParse {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    write_atomic(path, &bytes)
}

/// Reads a ground-truth table back into sorted `(image_id, box)` rows.
pub fn read_gt_table(path: &Path) -> Result<Vec<(String, BBox)>> {
    let parse_err = |msg: String| Error::ManifestParse {
        path: path.to_path_buf(),
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| parse_err(e.to_string()))?;
    let headers = reader.headers().map_err(|e| parse_err(e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != GT_HEADER {
        return Err(parse_err(format!(
            "header must be {:?}",
            GT_HEADER.join(",")
        )));
    }

    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        let row = i + 2;
        let id = record[0].to_string();
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateImageId(id));
        }
        let mut coords = [0i64; 4];
        for (j, c) in coords.iter_mut().enumerate() {
            *c = record[j + 1]
                .parse::<i64>()
                .map_err(|e| parse_err(format!("row {row}: {e}")))?;
        }
        rows.push((id, BBox::new(coords[0], coords[1], coords[2], coords[3])?));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(rows)
}

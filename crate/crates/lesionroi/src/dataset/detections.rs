//! Line-oriented detections interchange file.
//!
//! Each line is one JSON object, `{"image_id": "...", "boxes": [[x_min,
//! y_min, x_max, y_max, score], ...]}`, which keeps the file appendable and
//! diffable and lets detectors written in any language emit it directly.
//! Images absent from the file simply have no detections.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::Detection;
use crate::geometry::BBox;

/// Detections keyed by image id, each list in file order.
pub type DetectionsFile = BTreeMap<String, Vec<Detection>>;

#[derive(Debug, Serialize, Deserialize)]
struct DetLine {
    image_id: String,
    boxes: Vec<(i64, i64, i64, i64, f64)>,
}

/// Parses a detections file.
///
/// Coordinates must be integers and scores must lie in `[0, 1]`; a line
/// that is not valid JSON is a parse error and a line whose boxes violate
/// the box or score invariants is a validation error, both tagged with the
/// 1-based line number. Duplicate image ids are rejected.
pub fn read_detections(path: &Path) -> Result<DetectionsFile> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut out = DetectionsFile::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: DetLine = serde_json::from_str(&line).map_err(|e| Error::DetectionsParse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let mut dets = Vec::with_capacity(parsed.boxes.len());
        for &(x0, y0, x1, y1, score) in &parsed.boxes {
            let bbox = BBox::new(x0, y0, x1, y1).map_err(|e| Error::InvalidDetection {
                line: line_no,
                msg: e.to_string(),
            })?;
            let det = Detection::new(bbox, score).map_err(|e| Error::InvalidDetection {
                line: line_no,
                msg: e.to_string(),
            })?;
            dets.push(det);
        }
        if out.insert(parsed.image_id.clone(), dets).is_some() {
            return Err(Error::DuplicateImageId(parsed.image_id));
        }
    }
    Ok(out)
}

/// Writes a detections file, one line per image id in sorted order.
pub fn write_detections(path: &Path, detections: &DetectionsFile) -> Result<()> {
    let mut buf = Vec::new();
    for (image_id, dets) in detections {
        let line = DetLine {
            image_id: image_id.clone(),
            boxes: dets
                .iter()
                .map(|d| {
                    let b = d.bbox();
                    (b.x_min(), b.y_min(), b.x_max(), b.y_max(), d.score())
                })
                .collect(),
        };
        serde_json::to_writer(&mut buf, &line).map_err(|e| Error::DetectionsParse {
            line: 0,
            msg: e.to_string(),
        })?;
        buf.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    super::write_atomic(path, &buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::TempDir;

    #[test]
    fn parses_boxes_and_missing_ids() {
        let dir = TempDir::new().unwrap();
        let p = dir.path().join("dets.jsonl");
        std::fs::write(
            &p,
            r#"{"image_id":"b","boxes":[]}
{"image_id":"a","boxes":[[0,0,10,10,0.9],[1,1,11,11,0.8]]}
"#,
        )
        .unwrap();
        let d = read_detections(&p).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d["a"].len(), 2);
        assert!(d["b"].is_empty());
        assert_eq!(d["a"][0].score(), 0.9);
        assert_eq!(d["a"][1].bbox().as_tuple(), (1, 1, 11, 11));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = TempDir::new().unwrap();
        let p = dir.path().join("dets.jsonl");
        std::fs::write(&p, "{\"image_id\":\"a\",\"boxes\":[]}\nnot json\n").unwrap();
        match read_detections(&p) {
            Err(Error::DetectionsParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn fractional_coordinates_are_rejected() {
        let dir = TempDir::new().unwrap();
        let p = dir.path().join("dets.jsonl");
        std::fs::write(&p, r#"{"image_id":"a","boxes":[[0.5,0,10,10,0.9]]}"#).unwrap();
        assert!(matches!(
            read_detections(&p),
            Err(Error::DetectionsParse { line: 1, .. })
        ));
    }

    #[test]
    fn invalid_box_and_score_are_validation_errors() {
        let dir = TempDir::new().unwrap();
        let p = dir.path().join("dets.jsonl");
        std::fs::write(&p, r#"{"image_id":"a","boxes":[[10,0,5,10,0.9]]}"#).unwrap();
        assert!(matches!(
            read_detections(&p),
            Err(Error::InvalidDetection { line: 1, .. })
        ));

        std::fs::write(&p, r#"{"image_id":"a","boxes":[[0,0,5,10,1.5]]}"#).unwrap();
        assert!(matches!(
            read_detections(&p),
            Err(Error::InvalidDetection { line: 1, .. })
        ));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let dir = TempDir::new().unwrap();
        let p = dir.path().join("dets.jsonl");
        std::fs::write(
            &p,
            "{\"image_id\":\"a\",\"boxes\":[]}\n{\"image_id\":\"a\",\"boxes\":[]}\n",
        )
        .unwrap();
        assert!(matches!(
            read_detections(&p),
            Err(Error::DuplicateImageId(_))
        ));
    }

    #[test]
    fn round_trip_preserves_everything() {
        let dir = TempDir::new().unwrap();
        let p = dir.path().join("dets.jsonl");
        let mut d = DetectionsFile::new();
        d.insert(
            "img1".into(),
            vec![
                Detection::new(BBox::new(3, 4, 30, 40).unwrap(), 0.125).unwrap(),
                Detection::new(BBox::new(0, 0, 1, 1).unwrap(), 1.0).unwrap(),
            ],
        );
        d.insert("img2".into(), vec![]);
        write_detections(&p, &d).unwrap();
        assert_eq!(read_detections(&p).unwrap(), d);
    }
}

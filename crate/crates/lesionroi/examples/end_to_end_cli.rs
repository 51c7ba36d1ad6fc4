//! Drive the batch interface end to end on a synthesized dataset:
//! convert-gt derives boxes from masks, eval-det scores those boxes
//! replayed as detections, and augment writes the multiplied dataset.
//!
//! Run with: cargo run --example end_to_end_cli

use std::fs;
use std::io::Write as _;
use std::path::Path;

use image::{Rgb, RgbImage};

/// Writes one image/mask pair with a rectangular lesion.
fn write_pair(dir: &Path, id: &str, lesion: (u32, u32, u32, u32)) {
    let (width, height) = (400u32, 300u32);
    let (x0, y0, x1, y1) = lesion;
    let mut image = RgbImage::new(width, height);
    let mut mask = image::GrayImage::new(width, height);
    for y in 0..height {
        for x in 0..width {
            let inside = x >= x0 && x < x1 && y >= y0 && y < y1;
            image.put_pixel(
                x,
                y,
                if inside {
                    Rgb([110, 70, 50])
                } else {
                    Rgb([205, 185, 170])
                },
            );
            mask.put_pixel(x, y, image::Luma([if inside { 255 } else { 0 }]));
        }
    }
    image.save(dir.join(format!("{id}.png"))).unwrap();
    mask.save(dir.join(format!("{id}_mask.png"))).unwrap();
}

fn run(args: &[&str]) {
    let mut argv = vec!["lesionroi"];
    argv.extend_from_slice(args);
    let code = lesionroi::cli::run(argv);
    assert_eq!(code, 0, "command failed: {args:?}");
}

fn main() {
    let root = tempfile::tempdir().unwrap();
    let data = root.path().join("data");
    fs::create_dir_all(&data).unwrap();

    // 1. Three images with lesions of different sizes and positions.
    write_pair(&data, "a", (60, 50, 200, 170));
    write_pair(&data, "b", (150, 100, 280, 220));
    write_pair(&data, "c", (10, 10, 120, 90));
    let manifest = data.join("manifest.csv");
    let mut f = fs::File::create(&manifest).unwrap();
    writeln!(f, "image_id,image_path,mask_path,label").unwrap();
    writeln!(f, "a,a.png,a_mask.png,benign").unwrap();
    writeln!(f, "b,b.png,b_mask.png,malignant").unwrap();
    writeln!(f, "c,c.png,c_mask.png,benign").unwrap();
    drop(f);

    // 2. Masks -> ground-truth boxes.
    let gt = root.path().join("gt.csv");
    run(&[
        "convert-gt",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        gt.to_str().unwrap(),
    ]);
    println!("--- gt.csv ---\n{}", fs::read_to_string(&gt).unwrap());

    // 3. Replay the ground truth as detections and score it; a perfect
    //    detector gets precision and recall 1 at every threshold.
    let dets = root.path().join("dets.jsonl");
    let mut f = fs::File::create(&dets).unwrap();
    for line in fs::read_to_string(&gt).unwrap().lines().skip(1) {
        let parts: Vec<&str> = line.split(',').collect();
        writeln!(
            f,
            r#"{{"image_id":"{}","boxes":[[{},{},{},{},1.0]]}}"#,
            parts[0], parts[1], parts[2], parts[3], parts[4]
        )
        .unwrap();
    }
    drop(f);
    let report = root.path().join("eval.csv");
    run(&[
        "eval-det",
        "--manifest",
        manifest.to_str().unwrap(),
        "--gt",
        gt.to_str().unwrap(),
        "--dets",
        dets.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    println!("--- eval.csv ---\n{}", fs::read_to_string(&report).unwrap());

    // 4. Cut the augmented dataset and show its regenerated index.
    let out = root.path().join("augmented");
    run(&[
        "augment",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let images = fs::read_dir(out.join("images")).unwrap().count();
    let masks = fs::read_dir(out.join("masks")).unwrap().count();
    println!("augmented: {images} images, {masks} masks");
    println!(
        "--- augmented/gt.csv (first 5 lines) ---\n{}",
        fs::read_to_string(out.join("gt.csv"))
            .unwrap()
            .lines()
            .take(5)
            .collect::<Vec<_>>()
            .join("\n")
    );
}

//! Apply an augmentation plan to an image and its mask in lockstep, then
//! verify every output mask still boxes the lesion.
//!
//! Run with: cargo run --example augment_lockstep

use image::{Rgb, RgbImage};
use lesionroi::{apply_plan, plan, AugmentParams, BinaryMask};

fn main() -> lesionroi::Result<()> {
    // 1. Synthesize a 500x375 image with an elliptical lesion and the
    //    matching mask.
    let (width, height) = (500u32, 375u32);
    let (cx, cy, rx, ry) = (250.0f64, 187.0f64, 60.0f64, 50.0f64);
    let mut image = RgbImage::new(width, height);
    let mut mask = BinaryMask::filled(width, height, false)?;
    for y in 0..height {
        for x in 0..width {
            let dx = (x as f64 - cx) / rx;
            let dy = (y as f64 - cy) / ry;
            if dx * dx + dy * dy <= 1.0 {
                image.put_pixel(x, y, Rgb([120, 60, 40]));
                mask.set(x, y, true);
            } else {
                image.put_pixel(x, y, Rgb([210, 180, 160]));
            }
        }
    }

    // 2. Plan around the mask's tight box and apply to both rasters.
    let roi = mask.circumscribe()?;
    let params = AugmentParams::default();
    let plan = plan("lesion", width, height, &roi, &params)?;
    let samples = apply_plan(&image, Some(&mask), &plan, &params)?;
    println!(
        "{} outputs of {}x{} from ladder {:?}",
        samples.len(),
        params.target_side,
        params.target_side,
        plan.ladder
    );

    // 3. Every output keeps image and mask aligned: the augmented mask is
    //    nonempty and its tight box sits inside the output frame.
    for sample in &samples {
        let out_mask = sample.mask.as_ref().expect("mask was provided");
        let bbox = out_mask.circumscribe()?;
        println!(
            "  {}  lesion box ({}, {}, {}, {})  {} px",
            sample.record.out_id,
            bbox.x_min(),
            bbox.y_min(),
            bbox.x_max(),
            bbox.y_max(),
            out_mask.foreground_count()
        );
        assert_eq!(sample.image.width(), params.target_side);
        assert_eq!(sample.image.height(), params.target_side);
        assert!(bbox.fits_in(params.target_side, params.target_side));
    }
    Ok(())
}

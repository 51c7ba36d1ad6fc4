//! Derive a tight ROI bounding box from a segmentation mask.
//!
//! Builds a small mask with two blobs, then shows the difference between
//! boxing all foreground and boxing only the largest connected component.
//!
//! Run with: cargo run --example mask_to_box

use lesionroi::BinaryMask;

fn main() -> lesionroi::Result<()> {
    // 1. A 24x16 mask with a large lesion and a small speck of noise.
    let mut mask = BinaryMask::filled(24, 16, false)?;
    for y in 3..12 {
        for x in 4..15 {
            mask.set(x, y, true);
        }
    }
    mask.set(20, 2, true);
    mask.set(21, 2, true);

    // 2. Boxing every foreground pixel includes the speck.
    let all = mask.circumscribe()?;
    println!(
        "all foreground    -> ({}, {}, {}, {})  {}x{}",
        all.x_min(),
        all.y_min(),
        all.x_max(),
        all.y_max(),
        all.width(),
        all.height()
    );

    // 3. Keeping only the largest 4-connected component drops it.
    let main_blob = mask.largest_component()?;
    let tight = main_blob.circumscribe()?;
    println!(
        "largest component -> ({}, {}, {}, {})  {}x{}",
        tight.x_min(),
        tight.y_min(),
        tight.x_max(),
        tight.y_max(),
        tight.width(),
        tight.height()
    );

    assert_eq!(all.as_tuple(), (4, 2, 22, 12));
    assert_eq!(tight.as_tuple(), (4, 3, 15, 12));
    Ok(())
}

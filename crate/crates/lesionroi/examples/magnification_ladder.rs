//! Plan a multi-magnification crop ladder around one ROI.
//!
//! Shows which square window sides the planner picks for a 500x375 frame
//! with a 120x100 lesion box, and the windows it clamps into the frame.
//!
//! Run with: cargo run --example magnification_ladder

use lesionroi::{plan, AugmentParams, BBox};

fn main() -> lesionroi::Result<()> {
    // 1. Frame and ROI from a typical dermoscopic layout.
    let (width, height) = (500u32, 375u32);
    let roi = BBox::new(190, 138, 310, 238)?;
    let params = AugmentParams::default();

    // 2. The ladder starts at the padded ROI (or the output side, whichever
    //    is larger), multiplies by the step, and ends at the short frame
    //    side when that adds a meaningfully wider view.
    let plan = plan("sample", width, height, &roi, &params)?;
    println!("ladder sides: {:?}", plan.ladder);
    assert_eq!(plan.ladder, vec![224, 336, 375]);

    // 3. Each level yields one window per rotation; windows are clamped to
    //    the frame without shrinking, so the lesion drifts off-center only
    //    when the frame edge forces it to.
    println!("{} planned outputs:", plan.records.len());
    for record in &plan.records {
        let w = &record.window;
        println!(
            "  {}  window=({}, {}, {}, {})  side={}  turn={}deg",
            record.out_id,
            w.x_min(),
            w.y_min(),
            w.x_max(),
            w.y_max(),
            w.width(),
            record.turn.degrees()
        );
    }
    assert_eq!(plan.records.len(), 12);
    Ok(())
}

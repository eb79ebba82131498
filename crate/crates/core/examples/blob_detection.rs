//! Render two fingers onto a frame, detect blobs and vote over a window.

use wristsketch::framestream::{preprocess, PreprocessConfig, PressureFrame};
use wristsketch::synth::{render_finger, FingerModel};
use wristsketch::touchdetect::{detect_blobs, touch_point_of, TouchTracker};

fn main() {
    let mut frame = PressureFrame::zeroed(0, 0);
    render_finger(&mut frame, &FingerModel::at(12.3, 18.0));
    render_finger(&mut frame, &FingerModel { peak: 170.0, ..FingerModel::at(24.6, 18.4) });
    let clean = preprocess(&frame, &PreprocessConfig::default()).unwrap();

    for (i, blob) in detect_blobs(&clean).iter().enumerate() {
        let tp = touch_point_of(blob);
        println!("blob {i}: {} cells, peak {} at ({}, {}), centroid {:?}", blob.cells.len(), tp.pressure, tp.x, tp.y, blob.centroid());
    }

    let mut tracker = TouchTracker::new(3);
    for seq in 0..3u16 {
        let f = PressureFrame::from_cells(seq, seq as u32 * 16, *clean.cells());
        if let Some(obs) = tracker.push(&f) {
            println!("voted: {} finger(s), position {:?}, fine {:?}", obs.finger_count, obs.position(), obs.fine_position());
        }
    }
}

mod common;

use proptest::prelude::*;

use wristsketch::framestream::{preprocess, PreprocessConfig, PressureFrame};
use wristsketch::geom::Point;
use wristsketch::synth::{render_finger, FingerModel};
use wristsketch::touchdetect::{detect, detect_blobs, observe, touch_point_of, FrameBlobs, TouchTracker, MIN_BLOB_CELLS};

use common::{oracle_blobs, random_frame, rng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_sweep_oracle(seed in any::<u64>()) {
        let f = random_frame(&mut rng(seed));
        let d = detect(&f);
        let (kept, mut dropped) = oracle_blobs(&f);
        let got: Vec<_> = d.blobs.iter().map(|b| b.cells.iter().map(|c| (c.x, c.y, c.pressure)).collect::<Vec<_>>()).collect();
        let mut got_d: Vec<_> = d.discarded.iter().map(|r| r.iter().map(|c| (c.x, c.y, c.pressure)).collect::<Vec<_>>()).collect();
        got_d.sort();
        dropped.sort();
        prop_assert_eq!(got, kept);
        prop_assert_eq!(got_d, dropped);
    }

    #[test]
    fn blobs_are_disjoint_sorted_and_large(seed in any::<u64>()) {
        let f = random_frame(&mut rng(seed));
        let blobs = detect_blobs(&f);
        let mut seen = std::collections::HashSet::new();
        for b in &blobs {
            prop_assert!(b.cells.len() >= MIN_BLOB_CELLS);
            for c in &b.cells {
                prop_assert!(seen.insert((c.x, c.y)));
                prop_assert_eq!(f.get(c.x, c.y), c.pressure);
            }
            let tp = touch_point_of(b);
            prop_assert!(b.cells.iter().all(|c| c.pressure <= tp.pressure));
        }
        for w in blobs.windows(2) {
            let (a, b) = (w[0].peak, w[1].peak);
            prop_assert!((std::cmp::Reverse(a.pressure), a.y, a.x) < (std::cmp::Reverse(b.pressure), b.y, b.x));
        }
    }
}

#[test]
fn one_finger_one_blob_two_fingers_two() {
    let mut f = PressureFrame::zeroed(0, 0);
    let clean = |f: &PressureFrame| preprocess(f, &PreprocessConfig::default()).unwrap();
    render_finger(&mut f, &FingerModel::at(10.4, 20.2));
    assert_eq!(detect_blobs(&clean(&f)).len(), 1);
    render_finger(&mut f, &FingerModel::at(18.4, 20.2));
    let blobs = detect_blobs(&clean(&f));
    assert_eq!(blobs.len(), 2);
    let xs: Vec<_> = blobs.iter().map(|b| b.centroid().x.round()).collect();
    assert!(xs.contains(&10.0) && xs.contains(&18.0), "{xs:?}");
}

#[test]
fn unanimous_window_reports_mean_position() {
    let frames: Vec<FrameBlobs> = [(10.0, 20.0), (11.0, 20.0), (12.0, 21.0)]
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let mut f = PressureFrame::zeroed(i as u16, 0);
            render_finger(&mut f, &FingerModel::at(x, y));
            let f = preprocess(&f, &PreprocessConfig::default()).unwrap();
            FrameBlobs { seq: i as u16, blobs: detect_blobs(&f) }
        })
        .collect();
    let obs = observe(&frames).unwrap();
    assert_eq!(obs.finger_count, 1);
    assert!(obs.position().unwrap().dist(Point::new(11.0, 61.0 / 3.0)) < 1e-9);
    assert_eq!(obs.window_seqs, vec![0, 1, 2]);
}

#[test]
fn tracker_votes_out_a_single_glitch() {
    let mut tracker = TouchTracker::new(3);
    let mut one = PressureFrame::zeroed(0, 0);
    render_finger(&mut one, &FingerModel::at(20.0, 20.0));
    let mut two = one.clone();
    render_finger(&mut two, &FingerModel::at(30.0, 20.0));
    let mut counts = vec![];
    for (i, f) in [&one, &one, &two, &one, &one].into_iter().enumerate() {
        let mut f = f.clone();
        f.seq = i as u16;
        counts.extend(tracker.push(&f).map(|o| o.finger_count));
    }
    assert_eq!(counts, vec![1, 1, 1]);
}

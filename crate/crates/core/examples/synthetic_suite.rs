//! Generate the 12-class synthetic gesture suite under three noise levels,
//! run it through the recognition pipeline and print the confusion matrices.

use wristsketch::metrics::{accuracy, score_events};
use wristsketch::session::{recognize_frames, SessionConfig};
use wristsketch::synth::{gesture_suite, script_to_stream, NoiseModel};

fn main() {
    let per_class = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let suite = gesture_suite(per_class, 7);
    let cfg = SessionConfig::default();
    let levels = [
        ("zero noise", NoiseModel::none(1)),
        ("nominal", NoiseModel::nominal(1)),
        ("dropout 0.3", NoiseModel { salt_prob: 0.002, dropout_prob: 0.3, seed: 1 }),
    ];
    for (name, noise) in levels {
        let frames = script_to_stream(&suite.script, &noise).expect("valid suite");
        let events = recognize_frames(&frames, &cfg).expect("clean frames");
        let cm = score_events(&events, &suite.truth).expect("known labels");
        println!("== {name}: {} frames, accuracy {:.4}", frames.len(), accuracy(&cm).unwrap());
        println!("{}", cm.to_table());
    }
}

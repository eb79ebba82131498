//! Write a short synthetic stream as a binary replay and as a hex text
//! fixture, read both back and preprocess the frames.

use std::io::Cursor;

use wristsketch::framestream::{preprocess, read_replay, read_text_fixture, write_replay, write_text_fixture, PreprocessConfig};
use wristsketch::synth::{script_to_stream, FingerModel, GestureScript, Keyframe, NoiseModel};

fn main() {
    let script = GestureScript {
        label: None,
        timeline: vec![
            Keyframe { t_ms: 50.0, fingers: vec![FingerModel::at(20.0, 20.0)] },
            Keyframe { t_ms: 150.0, fingers: vec![] },
        ],
    };
    let frames = script_to_stream(&script, &NoiseModel::nominal(3)).unwrap();

    let mut bin = vec![];
    write_replay(&mut bin, &frames).unwrap();
    let mut text = vec![];
    write_text_fixture(&mut text, &frames).unwrap();
    println!("{} frames: {} bytes binary, {} bytes text", frames.len(), bin.len(), text.len());

    let a = read_replay(Cursor::new(&bin)).unwrap();
    let b = read_text_fixture(Cursor::new(&text)).unwrap();
    assert_eq!(a, frames);
    assert_eq!(b, frames);

    let cfg = PreprocessConfig::default();
    for f in &frames {
        let clean = preprocess(f, &cfg).unwrap();
        println!(
            "seq {:>2} t {:>3} ms: {:>3} raw nonzero -> {:>3} after threshold + median",
            f.seq,
            f.timestamp_ms,
            f.nonzero().count(),
            clean.nonzero().count()
        );
    }
}

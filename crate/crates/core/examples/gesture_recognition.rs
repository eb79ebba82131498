//! Script a tap, a double tap, a long press and a drag, and print the
//! gesture events the recognizer produces.

use wristsketch::session::{recognize_frames, SessionConfig};
use wristsketch::synth::{script_to_stream, FingerModel, GestureScript, Keyframe, NoiseModel};

fn key(t_ms: f64, at: Option<(f64, f64)>) -> Keyframe {
    Keyframe { t_ms, fingers: at.map(|(x, y)| vec![FingerModel::at(x, y)]).unwrap_or_default() }
}

fn main() {
    let left = Some((7.0, 19.5));
    let timeline = vec![
        // tap
        key(200.0, left),
        key(300.0, None),
        // double tap
        key(1300.0, Some((20.0, 20.0))),
        key(1390.0, None),
        key(1600.0, Some((20.0, 20.0))),
        key(1690.0, None),
        // long press held through two menu ticks
        key(2800.0, Some((32.0, 19.5))),
        key(4800.0, Some((32.0, 19.5))),
        key(4820.0, None),
        // drag
        key(5800.0, Some((10.0, 30.0))),
        key(5900.0, Some((10.0, 30.0))),
        key(6600.0, Some((30.0, 30.0))),
        key(6620.0, None),
        key(7200.0, None),
    ];
    let frames = script_to_stream(&GestureScript { label: None, timeline }, &NoiseModel::none(0)).unwrap();
    for ev in recognize_frames(&frames, &SessionConfig::default()).unwrap() {
        println!(
            "{:>5}..{:>5} ms {:?} fingers={} zone={:?} at {:?}",
            ev.t_start, ev.t_end, ev.kind, ev.fingers, ev.zone, ev.fine_position
        );
    }
}

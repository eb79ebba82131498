//! Trace each template with a scripted finger, run the frames through the
//! full session and score the resulting stroke with and without tremor.

use wristsketch::metrics::{score_drawing, DeConfig, Template};
use wristsketch::session::{run_session, SessionConfig};
use wristsketch::synth::{script_to_stream, tracer_script, NoiseModel};

fn traced_de(template: Template, tremor: Option<(f64, u64)>) -> f64 {
    let cfg = SessionConfig::default();
    let script = tracer_script(&template.outline(), &cfg.canvas, 6.0, tremor);
    let frames = script_to_stream(&script, &NoiseModel::none(0)).unwrap();
    let (session, _) = run_session(&frames, &cfg).unwrap();
    let pts: Vec<_> = session.doc.canvas_strokes().flat_map(|(_, s)| s.points).collect();
    score_drawing(&pts, &template.outline(), &DeConfig::default()).unwrap()
}

fn main() {
    for t in [Template::Rect, Template::Triangle, Template::Circle] {
        println!("{:<9} perfect {:.3}  tremor(4) {:.3}", t.name(), traced_de(t, None), traced_de(t, Some((4.0, 1))));
    }
}

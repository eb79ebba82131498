//! Bind each of the five animation kinds to an asset and sample the scene.

use wristsketch::anim::{scene_at, AnimationBinding, EmitParams};
use wristsketch::geom::Point;
use wristsketch::sketch::{SketchDocument, StrokeCommand};

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn square(doc: &mut SketchDocument, x: f64, y: f64) {
    doc.create_asset();
    doc.apply_stroke_command(StrokeCommand::Begin(p(x, y))).unwrap();
    for q in [p(x + 4.0, y), p(x + 4.0, y + 4.0), p(x, y + 4.0), p(x, y)] {
        doc.apply_stroke_command(StrokeCommand::Point(q)).unwrap();
    }
    doc.apply_stroke_command(StrokeCommand::End).unwrap();
}

fn main() {
    let mut doc = SketchDocument::new();
    let bindings = [
        AnimationBinding::doodle(),
        AnimationBinding::Frame { frames: vec![vec![]], frame_rate: 2.0 },
        AnimationBinding::Emit(EmitParams::new([p(500.0, 600.0), p(560.0, 600.0)], [p(530.0, 600.0), p(600.0, 530.0)])),
        AnimationBinding::Rotate { angle_deg: 360.0, period_s: 4.0, center: None },
        AnimationBinding::Move { trajectory: vec![p(0.0, 0.0), p(200.0, 0.0), p(200.0, 100.0)], duration_s: 4.0 },
    ];
    for (i, b) in bindings.into_iter().enumerate() {
        square(&mut doc, 3.0 + 7.0 * i as f64, 10.0);
        println!("asset {i}: {:?}", b.kind());
        doc.bind_animation(b).unwrap();
    }
    for t in [0, 250, 1000, 2000, 4000] {
        let scene = scene_at(&doc, t, 42);
        let firsts: Vec<_> = scene.strokes.iter().map(|s| s.points.first().copied()).collect();
        println!("t={t:>4} ms: {} strokes, {} particles, frame indices {:?}", scene.strokes.len(), scene.particles.len(), scene.frames);
        println!("        first vertices {firsts:.1?}");
    }
}

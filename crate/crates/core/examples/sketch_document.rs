//! Build a document by hand: strokes, mirror brush, colour picker, erase,
//! move, undo, and a JSON round trip.

use wristsketch::geom::Point;
use wristsketch::sketch::{move_picker_pin, Brush, Mode, SketchDocument, StrokeCommand};

fn stroke(doc: &mut SketchDocument, pts: &[(f64, f64)]) {
    doc.apply_stroke_command(StrokeCommand::Begin(Point::new(pts[0].0, pts[0].1))).unwrap();
    for &(x, y) in &pts[1..] {
        doc.apply_stroke_command(StrokeCommand::Point(Point::new(x, y))).unwrap();
    }
    doc.apply_stroke_command(StrokeCommand::End).unwrap();
}

fn main() {
    let mut doc = SketchDocument::new();
    stroke(&mut doc, &[(5.0, 10.0), (15.0, 10.0), (15.0, 20.0)]);

    let b = move_picker_pin(&doc.brush, 4, 0);
    doc.set_brush(Brush { mirror: true, thickness: 6.0, ..b });
    stroke(&mut doc, &[(8.0, 30.0), (12.0, 34.0)]);
    for (id, s) in doc.canvas_strokes() {
        println!("asset {id}: {} points, colour {:?}, first {:?}", s.points.len(), s.color, s.points[0]);
    }

    doc.set_mode(Mode::Erase);
    let hit = doc.canvas_strokes().next().unwrap().1.points[1];
    doc.erase_at(hit, 20.0).unwrap();
    println!("after erase: {} strokes", doc.canvas_strokes().count());

    doc.set_mode(Mode::Move);
    doc.move_asset(Point::new(100.0, -40.0)).unwrap();
    println!("origin {:?}, undo depth {}", doc.assets[0].origin, doc.undo_depth());

    let json = doc.to_json();
    assert_eq!(SketchDocument::from_json(&json).unwrap(), doc);
    println!("JSON round trip ok ({} bytes)", json.len());

    while doc.undo() {}
    println!("fully undone: {} assets", doc.assets.len());
}

//! Shared oracles and generators for the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wristsketch::anim::{AnimationBinding, EmitParams};
use wristsketch::framestream::{preprocess, PreprocessConfig, PressureFrame, GRID};
use wristsketch::geom::Point;
use wristsketch::sketch::{Brush, Mode, SketchDocument, StrokeCommand};
use wristsketch::synth::{render_finger, FingerModel, GestureScript, Keyframe};

pub type CellSet = Vec<(usize, usize, u8)>;

/// Region growing by repeated full sweeps until nothing changes.
///
/// A cell joins when it is nonzero, unclaimed, and more than half of some
/// member it touches. Once a region is closed, every nonzero cell touching
/// it is claimed. Returns (kept, discarded), each sorted by (y, x).
pub fn oracle_blobs(frame: &PressureFrame) -> (Vec<CellSet>, Vec<CellSet>) {
    let g = GRID as i64;
    let p = |x: i64, y: i64| frame.get(x as usize, y as usize) as i64;
    let touching = |a: (i64, i64), b: (i64, i64)| a != b && (a.0 - b.0).abs() <= 1 && (a.1 - b.1).abs() <= 1;
    let mut claimed = vec![vec![false; GRID]; GRID];
    let (mut kept, mut dropped) = (vec![], vec![]);
    loop {
        // Highest unclaimed nonzero cell, first in row-major order on ties.
        let mut seed: Option<(i64, i64)> = None;
        for y in 0..g {
            for x in 0..g {
                if p(x, y) > 0 && !claimed[y as usize][x as usize] && seed.is_none_or(|(sx, sy)| p(x, y) > p(sx, sy)) {
                    seed = Some((x, y));
                }
            }
        }
        let Some(seed) = seed else { break };
        let mut members = vec![seed];
        claimed[seed.1 as usize][seed.0 as usize] = true;
        loop {
            let mut grew = false;
            for y in 0..g {
                for x in 0..g {
                    if claimed[y as usize][x as usize] || p(x, y) == 0 {
                        continue;
                    }
                    if members.iter().any(|&m| touching(m, (x, y)) && 2 * p(x, y) > p(m.0, m.1)) {
                        claimed[y as usize][x as usize] = true;
                        members.push((x, y));
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        for y in 0..g {
            for x in 0..g {
                if p(x, y) > 0 && members.iter().any(|&m| touching(m, (x, y))) {
                    claimed[y as usize][x as usize] = true;
                }
            }
        }
        let mut cells: CellSet = members.iter().map(|&(x, y)| (x as usize, y as usize, p(x, y) as u8)).collect();
        cells.sort_by_key(|&(x, y, _)| (y, x));
        if cells.len() >= 5 {
            kept.push(cells);
        } else {
            dropped.push(cells);
        }
    }
    (kept, dropped)
}

/// Mean distance from each drawing point to its nearest template point, by full scan.
pub fn oracle_de(drawing: &[Point], template: &[Point]) -> f64 {
    let mut sum = 0.0;
    for d in drawing {
        let mut best = f64::INFINITY;
        for t in template {
            let dist = ((d.x - t.x).powi(2) + (d.y - t.y).powi(2)).sqrt();
            if dist < best {
                best = dist;
            }
        }
        sum += best;
    }
    sum / drawing.len() as f64
}

/// Assorted random frames: finger clusters with and without preprocessing,
/// uniform speckle, and plateaus with equal-pressure ties.
pub fn random_frame(rng: &mut ChaCha8Rng) -> PressureFrame {
    let mut f = PressureFrame::zeroed(0, 0);
    match rng.random_range(0..4) {
        0 | 1 => {
            for _ in 0..rng.random_range(1..=4) {
                let fm = FingerModel {
                    center: Point::new(rng.random_range(-1.0..41.0), rng.random_range(-1.0..41.0)),
                    peak: rng.random_range(40.0..255.0),
                    sigma: rng.random_range(0.6..2.2),
                };
                render_finger(&mut f, &fm);
            }
            for _ in 0..rng.random_range(0..40) {
                let (x, y) = (rng.random_range(0..GRID), rng.random_range(0..GRID));
                f.set(x, y, rng.random());
            }
            if rng.random_bool(0.5) {
                f = preprocess(&f, &PreprocessConfig::default()).unwrap();
            }
        }
        2 => {
            let density = rng.random_range(0.05..0.6);
            for c in f.cells_mut().iter_mut() {
                if rng.random_bool(density) {
                    *c = rng.random_range(1..=255);
                }
            }
        }
        _ => {
            for _ in 0..rng.random_range(1..6) {
                let (x0, y0) = (rng.random_range(0..GRID), rng.random_range(0..GRID));
                let (w, h) = (rng.random_range(1..6), rng.random_range(1..6));
                let v = [50u8, 100, 101, 200][rng.random_range(0..4)];
                for y in y0..(y0 + h).min(GRID) {
                    for x in x0..(x0 + w).min(GRID) {
                        f.set(x, y, v);
                    }
                }
            }
        }
    }
    f
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn key(t_ms: f64, fingers: &[(f64, f64)]) -> Keyframe {
    Keyframe { t_ms, fingers: fingers.iter().map(|&(x, y)| FingerModel::at(x, y)).collect() }
}

/// A session that draws two strokes, opens the main menu and holds it to
/// "Animation", then binds a doodle from the secondary menu.
pub fn drawing_session_script() -> GestureScript {
    let mut t = 200.0;
    let mut tl = vec![key(0.0, &[])];
    for (a, b) in [((8.0, 8.0), (30.0, 12.0)), ((10.0, 28.0), (28.0, 33.0))] {
        tl.push(key(t, &[a]));
        tl.push(key(t + 100.0, &[a]));
        tl.push(key(t + 900.0, &[b]));
        tl.push(key(t + 950.0, &[]));
        t += 1700.0;
    }
    // Main menu: open, four hold ticks (Move -> Animation), release.
    tl.push(key(t, &[(3.0, 20.0)]));
    tl.push(key(t + 4300.0, &[(3.0, 20.0)]));
    tl.push(key(t + 4350.0, &[]));
    t += 5200.0;
    // Two-finger left long press: secondary menu opens on "Doodle"; release.
    tl.push(key(t, &[(3.0, 16.0), (3.0, 24.0)]));
    tl.push(key(t + 1200.0, &[(3.0, 16.0), (3.0, 24.0)]));
    tl.push(key(t + 1250.0, &[]));
    tl.push(key(t + 2200.0, &[]));
    GestureScript { label: None, timeline: tl }
}

/// One random document operation. Returns false if it was rejected.
pub fn random_doc_op(doc: &mut SketchDocument, rng: &mut ChaCha8Rng) -> bool {
    let pad = |rng: &mut ChaCha8Rng| Point::new(rng.random_range(0.0..39.0), rng.random_range(0.0..39.0));
    let ok = match rng.random_range(0..10) {
        0 | 1 => {
            if doc.mode != Mode::Draw {
                doc.set_mode(Mode::Draw);
                return true;
            }
            let mut r = doc.apply_stroke_command(StrokeCommand::Begin(pad(rng)));
            for _ in 0..rng.random_range(0..6) {
                r = r.and_then(|_| doc.apply_stroke_command(StrokeCommand::Point(pad(rng))));
            }
            r.and_then(|_| doc.apply_stroke_command(StrokeCommand::End)).is_ok()
        }
        2 => {
            if doc.mode != Mode::Erase {
                doc.set_mode(Mode::Erase);
                return true;
            }
            let c = doc.canvas.pad_to_canvas(pad(rng)).unwrap();
            doc.erase_at(c, rng.random_range(5.0..80.0)).is_ok()
        }
        3 => {
            if doc.mode != Mode::Move {
                doc.set_mode(Mode::Move);
                return true;
            }
            doc.move_asset(Point::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0))).is_ok()
        }
        4 => {
            doc.create_asset();
            true
        }
        5 => doc.delete_asset().is_ok(),
        6 => {
            let n = doc.assets.len().max(1);
            doc.select_asset(rng.random_range(0..n)).is_ok()
        }
        7 => {
            let b = doc.brush;
            doc.set_brush(Brush { thickness: rng.random_range(0.0..40.0), mirror: rng.random_bool(0.3), ..b });
            true
        }
        8 => {
            let p = |rng: &mut ChaCha8Rng| Point::new(rng.random_range(0.0..1279.0), rng.random_range(0.0..719.0));
            let b = match rng.random_range(0..5) {
                0 => AnimationBinding::doodle(),
                1 => AnimationBinding::Frame { frames: vec![vec![]], frame_rate: 2.0 },
                2 => AnimationBinding::Emit(EmitParams::new([p(rng), p(rng)], [p(rng), p(rng)])),
                3 => AnimationBinding::Rotate { angle_deg: rng.random_range(-720.0..720.0), period_s: 2.0, center: None },
                _ => AnimationBinding::Move { trajectory: vec![p(rng), p(rng), p(rng)], duration_s: 3.0 },
            };
            doc.bind_animation(b).is_ok()
        }
        _ => {
            let Some(a) = doc.active() else { return false };
            if a.bindings.is_empty() {
                return false;
            }
            let i = rng.random_range(0..a.bindings.len());
            let b = match &a.bindings[i] {
                AnimationBinding::Rotate { period_s, center, .. } => {
                    AnimationBinding::Rotate { angle_deg: 90.0, period_s: *period_s, center: *center }
                }
                other => other.clone(),
            };
            doc.update_binding(i, b).is_ok()
        }
    };
    ok
}

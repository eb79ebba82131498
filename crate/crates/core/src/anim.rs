//! Animation bindings and their evaluation.
//!
//! Five kinds can be bound to an asset: Doodle (boiling-line jitter), Frame
//! (flip between stroke sets), Emit (particle copies), Rotate and Move.
//! Stacked bindings are applied as Frame selection, then Doodle jitter, then
//! Rotate, then Move, then the asset origin. Everything except Emit is a pure
//! function of time; Emit is advanced by [`step_emit`] at a fixed timestep.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;
use crate::sketch::{Asset, Canvas, Hsv, SketchDocument, Stroke};

pub const DOODLE_AMPLITUDE: f64 = 2.0;
pub const DOODLE_VARIANTS: u64 = 3;
pub const DOODLE_HZ: f64 = 8.0;
pub const GRAVITY: f64 = 200.0;
/// Acceleration magnitude per unit length of the drawn trajectory line.
pub const ACCEL_PER_LENGTH: f64 = 2.0;
/// Fixed simulation step for Emit, in seconds.
pub const EMIT_DT: f64 = 1.0 / 60.0;

#[derive(Debug, Error, PartialEq)]
pub enum AnimError {
    #[error("invalid property: {0}")]
    InvalidProperty(String),
    #[error("trajectory has zero length")]
    DegenerateTrajectory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnimationKind {
    Doodle,
    Frame,
    Emit,
    Rotate,
    Move,
}

impl AnimationKind {
    pub const ALL: [AnimationKind; 5] =
        [AnimationKind::Doodle, AnimationKind::Frame, AnimationKind::Emit, AnimationKind::Rotate, AnimationKind::Move];

    pub fn label(self) -> &'static str {
        match self {
            AnimationKind::Doodle => "Doodle",
            AnimationKind::Frame => "Frame",
            AnimationKind::Emit => "Emit",
            AnimationKind::Rotate => "Rotate",
            AnimationKind::Move => "Move",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmitParams {
    /// Ejection segment, canvas units.
    pub segment: [Point; 2],
    /// Drawn trajectory line; its direction and length set the resultant force.
    pub trajectory: [Point; 2],
    pub gravity: bool,
    /// Particles per second.
    pub spawn_rate: f64,
    /// Launch speed along the trajectory direction, units/s.
    pub initial_speed: f64,
    pub accel_per_length: f64,
}

impl EmitParams {
    pub fn new(segment: [Point; 2], trajectory: [Point; 2]) -> Self {
        Self { segment, trajectory, gravity: true, spawn_rate: 2.0, initial_speed: 60.0, accel_per_length: ACCEL_PER_LENGTH }
    }

    pub fn direction(&self) -> Point {
        (self.trajectory[1] - self.trajectory[0]).unit()
    }

    /// Resultant acceleration from the trajectory, as its (ax, ay) components.
    pub fn acceleration(&self) -> Point {
        let v = self.trajectory[1] - self.trajectory[0];
        self.direction() * (self.accel_per_length * v.norm())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AnimationBinding {
    Doodle {
        amplitude: f64,
    },
    /// Extra stroke sets flipped with the asset's own strokes (resource 0).
    Frame {
        frames: Vec<Vec<Stroke>>,
        frame_rate: f64,
    },
    Emit(EmitParams),
    Rotate {
        angle_deg: f64,
        period_s: f64,
        /// Canvas point; `None` means the asset's vertex mean.
        center: Option<Point>,
    },
    Move {
        trajectory: Vec<Point>,
        duration_s: f64,
    },
}

fn positive(name: &str, v: f64) -> Result<(), AnimError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(AnimError::InvalidProperty(format!("{name} must be positive, got {v}")))
    }
}

impl AnimationBinding {
    pub fn doodle() -> Self {
        AnimationBinding::Doodle { amplitude: DOODLE_AMPLITUDE }
    }

    pub fn kind(&self) -> AnimationKind {
        match self {
            AnimationBinding::Doodle { .. } => AnimationKind::Doodle,
            AnimationBinding::Frame { .. } => AnimationKind::Frame,
            AnimationBinding::Emit(_) => AnimationKind::Emit,
            AnimationBinding::Rotate { .. } => AnimationKind::Rotate,
            AnimationBinding::Move { .. } => AnimationKind::Move,
        }
    }

    pub fn validate(&self) -> Result<(), AnimError> {
        match self {
            AnimationBinding::Doodle { amplitude } => {
                if !(amplitude.is_finite() && *amplitude >= 0.0) {
                    return Err(AnimError::InvalidProperty(format!("amplitude {amplitude}")));
                }
            }
            AnimationBinding::Frame { frame_rate, .. } => positive("frame_rate", *frame_rate)?,
            AnimationBinding::Emit(p) => {
                if !(p.spawn_rate.is_finite() && p.spawn_rate >= 0.0) {
                    return Err(AnimError::InvalidProperty(format!("spawn_rate {}", p.spawn_rate)));
                }
                if !p.initial_speed.is_finite() || !p.accel_per_length.is_finite() {
                    return Err(AnimError::InvalidProperty("non-finite emit parameter".into()));
                }
            }
            AnimationBinding::Rotate { angle_deg, period_s, .. } => {
                positive("rotation time", *period_s)?;
                if !angle_deg.is_finite() {
                    return Err(AnimError::InvalidProperty(format!("angle {angle_deg}")));
                }
            }
            AnimationBinding::Move { trajectory, duration_s } => {
                positive("movement time", *duration_s)?;
                if trajectory.len() < 2 {
                    return Err(AnimError::InvalidProperty("trajectory needs at least 2 points".into()));
                }
            }
        }
        Ok(())
    }
}

/// Add `binding` to the asset after validating it.
pub fn bind(asset: &mut Asset, binding: AnimationBinding) -> Result<(), AnimError> {
    binding.validate()?;
    asset.bindings.push(binding);
    Ok(())
}

fn jitter_variant(strokes: &[Stroke], amplitude: f64, seed: u64, variant: u64) -> Vec<Stroke> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(variant));
    let mut off = || (rng.random::<f64>() * 2.0 - 1.0) * amplitude;
    strokes
        .iter()
        .map(|s| Stroke {
            points: s.points.iter().map(|&p| Point::new(p.x + off(), p.y + off())).collect(),
            ..s.clone()
        })
        .collect()
}

pub fn doodle_variant_index(t: f64) -> u64 {
    (t * DOODLE_HZ).floor().max(0.0) as u64 % DOODLE_VARIANTS
}

/// Jittered copy of `strokes` for time `t` (seconds).
pub fn eval_doodle(strokes: &[Stroke], amplitude: f64, t: f64, seed: u64) -> Vec<Stroke> {
    jitter_variant(strokes, amplitude, seed, doodle_variant_index(t))
}

/// Index of the displayed frame resource out of `k`.
pub fn eval_frame(k: usize, frame_rate: f64, t: f64) -> usize {
    if k <= 1 {
        return 0;
    }
    ((t * frame_rate).floor().max(0.0) as u64 % k as u64) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub center: Point,
    pub radians: f64,
}

impl Rotation {
    pub fn apply(&self, p: Point) -> Point {
        p.rotate_about(self.center, self.radians)
    }
}

/// Rotation at time `t` about `center` (same frame as the points it is applied to).
pub fn eval_rotate(angle_deg: f64, period_s: f64, center: Point, t: f64) -> Rotation {
    let phase = t.rem_euclid(period_s) / period_s;
    Rotation { center, radians: (angle_deg * phase).to_radians() }
}

/// Position along `trajectory` at fraction `(t mod T)/T` of its arc length.
pub fn eval_move(trajectory: &[Point], duration_s: f64, t: f64) -> Result<Point, AnimError> {
    let lengths: Vec<f64> = trajectory.windows(2).map(|w| w[0].dist(w[1])).collect();
    let total: f64 = lengths.iter().sum();
    if trajectory.is_empty() || total <= 0.0 {
        return Err(AnimError::DegenerateTrajectory);
    }
    let mut remaining = t.rem_euclid(duration_s) / duration_s * total;
    for (w, &len) in trajectory.windows(2).zip(&lengths) {
        if remaining <= len && len > 0.0 {
            return Ok(w[0].lerp(w[1], remaining / len));
        }
        remaining -= len;
    }
    Ok(*trajectory.last().expect("non-empty"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub position: Point,
    pub velocity: Point,
    pub birth_t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmitState {
    pub particles: Vec<Particle>,
    pub spawned: u64,
    pub elapsed: f64,
    rng: ChaCha8Rng,
}

impl EmitState {
    pub fn new(seed: u64) -> Self {
        Self { particles: vec![], spawned: 0, elapsed: 0.0, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

/// Advance an emitter by `dt` seconds: spawn due particles, integrate with
/// semi-implicit Euler, drop particles that left the canvas.
pub fn step_emit(params: &EmitParams, state: &mut EmitState, dt: f64, canvas: &Canvas) {
    let end = state.elapsed + dt;
    let dir = params.direction();
    if params.spawn_rate > 0.0 {
        while (state.spawned as f64) / params.spawn_rate < end - 1e-9 {
            let u: f64 = state.rng.random();
            let birth_t = state.spawned as f64 / params.spawn_rate;
            state.particles.push(Particle {
                position: params.segment[0].lerp(params.segment[1], u),
                velocity: dir * params.initial_speed,
                birth_t,
            });
            state.spawned += 1;
        }
    }
    let g = if params.gravity { Point::new(0.0, GRAVITY) } else { Point::ORIGIN };
    let acc = params.acceleration() + g;
    for p in &mut state.particles {
        p.velocity = p.velocity + acc * dt;
        p.position = p.position + p.velocity * dt;
    }
    state.particles.retain(|p| canvas.contains(p.position));
    state.elapsed = end;
}

/// Run an emitter from time 0 to `t` on the fixed grid, finishing with a partial step.
pub fn simulate_emit(params: &EmitParams, seed: u64, t: f64, canvas: &Canvas) -> EmitState {
    let mut state = EmitState::new(seed);
    let full = (t / EMIT_DT + 1e-9).floor().max(0.0) as u64;
    for _ in 0..full {
        step_emit(params, &mut state, EMIT_DT, canvas);
    }
    let rest = t - full as f64 * EMIT_DT;
    if rest > 1e-12 {
        step_emit(params, &mut state, rest, canvas);
    }
    state
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    FrameRate,
    RotationAngle,
    RotationTime,
    MovementTime,
    SpawnRate,
    Gravity,
}

impl Property {
    pub fn label(self) -> &'static str {
        match self {
            Property::FrameRate => "Frame Rate",
            Property::RotationAngle => "Rotation Angle",
            Property::RotationTime => "Rotation Time",
            Property::MovementTime => "Movement Time",
            Property::SpawnRate => "Spawn Rate",
            Property::Gravity => "Gravity",
        }
    }

    /// Step and inclusive range; `None` for the gravity toggle.
    pub fn step_range(self) -> Option<(f64, f64, f64)> {
        match self {
            Property::FrameRate => Some((1.0, 1.0, 30.0)),
            Property::RotationAngle => Some((15.0, 15.0, 360.0)),
            Property::RotationTime => Some((0.5, 0.5, 30.0)),
            Property::MovementTime => Some((0.5, 0.5, 30.0)),
            Property::SpawnRate => Some((0.5, 0.5, 20.0)),
            Property::Gravity => None,
        }
    }
}

/// Adjustable properties of a binding, in panel order.
pub fn properties_of(kind: AnimationKind) -> &'static [Property] {
    match kind {
        AnimationKind::Doodle => &[],
        AnimationKind::Frame => &[Property::FrameRate],
        AnimationKind::Emit => &[Property::SpawnRate, Property::Gravity],
        AnimationKind::Rotate => &[Property::RotationAngle, Property::RotationTime],
        AnimationKind::Move => &[Property::MovementTime],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Adjust {
    Dec,
    Inc,
}

/// Step `prop` of `binding` once. Properties the binding lacks are left alone.
pub fn adjust_property(binding: &AnimationBinding, prop: Property, dir: Adjust) -> AnimationBinding {
    let mut out = binding.clone();
    let field: Option<&mut f64> = match (&mut out, prop) {
        (AnimationBinding::Frame { frame_rate, .. }, Property::FrameRate) => Some(frame_rate),
        (AnimationBinding::Rotate { angle_deg, .. }, Property::RotationAngle) => Some(angle_deg),
        (AnimationBinding::Rotate { period_s, .. }, Property::RotationTime) => Some(period_s),
        (AnimationBinding::Move { duration_s, .. }, Property::MovementTime) => Some(duration_s),
        (AnimationBinding::Emit(p), Property::SpawnRate) => Some(&mut p.spawn_rate),
        (AnimationBinding::Emit(p), Property::Gravity) => {
            p.gravity = !p.gravity;
            None
        }
        _ => None,
    };
    if let (Some(v), Some((step, lo, hi))) = (field, prop.step_range()) {
        let signed = if dir == Adjust::Inc { step } else { -step };
        *v = (*v + signed).clamp(lo, hi);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneStroke {
    pub asset: u32,
    pub points: Vec<Point>,
    pub color: Hsv,
    pub thickness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneParticle {
    pub asset: u32,
    pub position: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFrame {
    pub t: u64,
    pub strokes: Vec<SceneStroke>,
    pub particles: Vec<SceneParticle>,
    /// (asset id, displayed frame resource) for every Frame-bound asset.
    pub frames: Vec<(u32, usize)>,
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    seed ^ a.wrapping_mul(0xD6E8_FEB8_6659_FD93) ^ b.wrapping_mul(0xA076_1D64_78BD_642F)
}

/// Strokes of one asset at time `t` seconds, in canvas units, with every
/// non-Emit binding applied. Also returns the displayed frame index if any.
pub fn eval_asset(asset: &Asset, t: f64, seed: u64) -> (Vec<Stroke>, Option<usize>) {
    let mut strokes = asset.strokes.clone();
    let mut frame_index = None;
    if let Some(AnimationBinding::Frame { frames, frame_rate }) =
        asset.bindings.iter().find(|b| b.kind() == AnimationKind::Frame)
    {
        let i = eval_frame(frames.len() + 1, *frame_rate, t);
        if i > 0 {
            strokes = frames[i - 1].clone();
        }
        frame_index = Some(i);
    }
    for (bi, b) in asset.bindings.iter().enumerate() {
        if let AnimationBinding::Doodle { amplitude } = b {
            strokes = eval_doodle(&strokes, *amplitude, t, mix(seed, asset.id as u64, bi as u64));
        }
    }
    for b in &asset.bindings {
        if let AnimationBinding::Rotate { angle_deg, period_s, center } = b {
            let c = center.map(|c| c - asset.origin).unwrap_or_else(|| asset.vertex_mean());
            let rot = eval_rotate(*angle_deg, *period_s, c, t);
            for s in &mut strokes {
                s.points.iter_mut().for_each(|p| *p = rot.apply(*p));
            }
        }
    }
    let mut shift = asset.origin;
    for b in &asset.bindings {
        if let AnimationBinding::Move { trajectory, duration_s } = b {
            if let Ok(p) = eval_move(trajectory, *duration_s, t) {
                shift = shift + (p - trajectory[0]);
            }
        }
    }
    for s in &mut strokes {
        s.points.iter_mut().for_each(|p| *p = *p + shift);
    }
    (strokes, frame_index)
}

/// The whole document at `t_ms`. Pure in (document, t, seed).
pub fn scene_at(doc: &SketchDocument, t_ms: u64, seed: u64) -> SceneFrame {
    let t = t_ms as f64 / 1000.0;
    let mut scene = SceneFrame { t: t_ms, strokes: vec![], particles: vec![], frames: vec![] };
    for asset in &doc.assets {
        let (strokes, frame) = eval_asset(asset, t, seed);
        scene.strokes.extend(strokes.into_iter().map(|s| SceneStroke {
            asset: asset.id,
            points: s.points,
            color: s.color,
            thickness: s.thickness,
        }));
        if let Some(i) = frame {
            scene.frames.push((asset.id, i));
        }
        for (bi, b) in asset.bindings.iter().enumerate() {
            if let AnimationBinding::Emit(p) = b {
                let state = simulate_emit(p, mix(seed, asset.id as u64, bi as u64), t, &doc.canvas);
                scene.particles.extend(
                    state.particles.iter().map(|q| SceneParticle { asset: asset.id, position: q.position }),
                );
            }
        }
    }
    scene
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn stroke(points: Vec<Point>) -> Stroke {
        Stroke { points, color: Hsv { h: 0.0, s: 0.0, v: 1.0 }, thickness: 4.0 }
    }

    fn square_asset() -> Asset {
        let mut a = Asset::new(1);
        a.strokes.push(stroke(vec![p(100.0, 100.0), p(200.0, 100.0), p(200.0, 200.0), p(100.0, 200.0)]));
        a
    }

    #[test]
    fn invalid_properties_are_rejected() {
        let mut a = Asset::new(1);
        let bad = AnimationBinding::Frame { frames: vec![], frame_rate: 0.0 };
        assert!(matches!(bind(&mut a, bad), Err(AnimError::InvalidProperty(_))));
        let short = AnimationBinding::Move { trajectory: vec![p(0.0, 0.0)], duration_s: 1.0 };
        assert!(bind(&mut a, short).is_err());
        assert!(a.bindings.is_empty());
        bind(&mut a, AnimationBinding::doodle()).unwrap();
        assert_eq!(a.bindings.len(), 1);
    }

    #[test]
    fn frame_index_examples() {
        assert_eq!(eval_frame(2, 2.0, 0.75), 1);
        assert_eq!(eval_frame(1, 12.0, 5.3), 0);
        assert_eq!(eval_frame(4, 3.0, 0.0), 0);
    }

    #[test]
    fn doodle_period_and_bound() {
        let s = vec![stroke(vec![p(10.0, 10.0), p(20.0, 30.0)])];
        assert_eq!(eval_doodle(&s, 2.0, 0.1, 7), eval_doodle(&s, 2.0, 0.1 + 3.0 / 8.0, 7));
        for v in 0..3 {
            let j = eval_doodle(&s, 2.0, v as f64 / 8.0 + 0.01, 7);
            for (a, b) in j[0].points.iter().zip(&s[0].points) {
                assert!((a.x - b.x).abs() <= 2.0 && (a.y - b.y).abs() <= 2.0);
            }
        }
        assert_ne!(eval_doodle(&s, 2.0, 0.01, 7), eval_doodle(&s, 2.0, 0.13, 7));
        assert_eq!(eval_doodle(&s, 0.0, 0.2, 7), s);
    }

    #[test]
    fn rotate_half_and_full_turn() {
        let c = p(150.0, 150.0);
        let half = eval_rotate(360.0, 4.0, c, 2.0);
        let q = half.apply(p(100.0, 100.0));
        assert!(q.dist(p(200.0, 200.0)) < 1e-9);
        let full = eval_rotate(360.0, 4.0, c, 4.0);
        assert!(full.apply(p(100.0, 100.0)).dist(p(100.0, 100.0)) < 1e-9);
    }

    #[test]
    fn single_point_asset_is_its_own_centre() {
        let mut a = Asset::new(1);
        a.strokes.push(stroke(vec![p(40.0, 50.0)]));
        a.bindings.push(AnimationBinding::Rotate { angle_deg: 90.0, period_s: 1.0, center: None });
        let (s, _) = eval_asset(&a, 0.37, 0);
        assert!(s[0].points[0].dist(p(40.0, 50.0)) < 1e-12);
    }

    #[test]
    fn move_arc_length() {
        let traj = [p(0.0, 0.0), p(100.0, 0.0)];
        assert_eq!(eval_move(&traj, 10.0, 0.0), Ok(p(0.0, 0.0)));
        assert_eq!(eval_move(&traj, 10.0, 10.0), Ok(p(0.0, 0.0)));
        assert!(eval_move(&traj, 10.0, 2.5).unwrap().dist(p(25.0, 0.0)) < 1e-12);
        let bent = [p(0.0, 0.0), p(30.0, 0.0), p(30.0, 70.0)];
        assert!(eval_move(&bent, 1.0, 0.5).unwrap().dist(p(30.0, 20.0)) < 1e-12);
        assert_eq!(eval_move(&[p(3.0, 3.0), p(3.0, 3.0)], 1.0, 0.2), Err(AnimError::DegenerateTrajectory));
    }

    #[test]
    fn emit_decomposition_is_symmetric_at_45_degrees() {
        let e = EmitParams::new([p(0.0, 0.0), p(10.0, 0.0)], [p(100.0, 100.0), p(150.0, 150.0)]);
        let a = e.acceleration();
        assert!((a.x.abs() - a.y.abs()).abs() < 1e-9);
        let len = 50.0 * 2f64.sqrt();
        assert!((a.x * a.x + a.y * a.y - (2.0 * len).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn emit_spawn_count_is_exact() {
        let e = EmitParams { gravity: false, initial_speed: 0.0, accel_per_length: 0.0, ..EmitParams::new(
            [p(100.0, 100.0), p(200.0, 100.0)],
            [p(0.0, 0.0), p(1.0, 0.0)],
        ) };
        let canvas = Canvas::default();
        let mut state = EmitState::new(3);
        for _ in 0..180 {
            step_emit(&e, &mut state, EMIT_DT, &canvas);
        }
        assert_eq!(state.spawned, 6);
        assert_eq!(state.particles.len(), 6);
        for q in &state.particles {
            assert_eq!(q.velocity, Point::ORIGIN);
            assert!(q.position.y == 100.0 && (100.0..=200.0).contains(&q.position.x));
        }
    }

    #[test]
    fn particles_leave_the_canvas() {
        let e = EmitParams::new([p(640.0, 700.0), p(641.0, 700.0)], [p(0.0, 0.0), p(0.0, 100.0)]);
        let s = simulate_emit(&e, 1, 3.0, &Canvas::default());
        assert_eq!(s.spawned, 6);
        assert!(s.particles.len() < 6);
    }

    #[test]
    fn property_steps() {
        let f = AnimationBinding::Frame { frames: vec![], frame_rate: 1.0 };
        assert_eq!(adjust_property(&f, Property::FrameRate, Adjust::Dec), f);
        let r = AnimationBinding::Rotate { angle_deg: 90.0, period_s: 4.0, center: None };
        let up = adjust_property(&r, Property::RotationAngle, Adjust::Inc);
        assert_eq!(up, AnimationBinding::Rotate { angle_deg: 105.0, period_s: 4.0, center: None });
        assert_eq!(adjust_property(&up, Property::RotationAngle, Adjust::Dec), r);
        assert_eq!(adjust_property(&r, Property::FrameRate, Adjust::Inc), r);
        let e = AnimationBinding::Emit(EmitParams::new([p(0.0, 0.0); 2], [p(0.0, 0.0); 2]));
        match adjust_property(&e, Property::Gravity, Adjust::Inc) {
            AnimationBinding::Emit(q) => assert!(!q.gravity),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn composition_order_doodle_then_rotate() {
        let mut a = square_asset();
        a.bindings.push(AnimationBinding::Rotate { angle_deg: 360.0, period_s: 4.0, center: None });
        a.bindings.push(AnimationBinding::doodle());
        let t = 1.0;
        let (got, _) = eval_asset(&a, t, 11);
        let jittered = eval_doodle(&a.strokes, 2.0, t, mix(11, 1, 1));
        let rot = eval_rotate(360.0, 4.0, a.vertex_mean(), t);
        let want: Vec<Point> = jittered[0].points.iter().map(|&q| rot.apply(q)).collect();
        for (g, w) in got[0].points.iter().zip(&want) {
            assert!(g.dist(*w) < 1e-9);
        }
    }

    #[test]
    fn move_binding_translates_relative_to_path_start() {
        let mut a = square_asset();
        a.origin = p(5.0, 5.0);
        a.bindings.push(AnimationBinding::Move { trajectory: vec![p(300.0, 300.0), p(400.0, 300.0)], duration_s: 2.0 });
        let (s, _) = eval_asset(&a, 1.0, 0);
        assert!(s[0].points[0].dist(p(155.0, 105.0)) < 1e-9);
    }

    #[test]
    fn scene_is_deterministic() {
        let mut doc = SketchDocument::new();
        let mut a = square_asset();
        a.bindings.push(AnimationBinding::doodle());
        a.bindings.push(AnimationBinding::Emit(EmitParams::new(
            [p(100.0, 100.0), p(200.0, 100.0)],
            [p(0.0, 0.0), p(30.0, -20.0)],
        )));
        doc.assets.push(a);
        let s1 = scene_at(&doc, 2345, 9);
        let s2 = scene_at(&doc, 2345, 9);
        assert_eq!(s1, s2);
        assert!(!s1.particles.is_empty());
        assert_eq!(serde_json::to_string(&s1).unwrap(), serde_json::to_string(&s2).unwrap());
    }
}

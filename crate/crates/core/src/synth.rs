//! Synthetic pressure streams: Gaussian finger footprints driven by timed
//! scripts, plus sensor-level noise.
//!
//! Everything here is deterministic in its seed, so generated suites can be
//! regenerated byte for byte.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framestream::{PressureFrame, CELLS, GRID, SENSOR_FPS};
use crate::geom::Point;
use crate::metrics::{TruthLabel, CLASS_LABELS};
use crate::sketch::Canvas;

/// Peak a dropped-out finger still reaches; below the default threshold.
pub const DROPOUT_PEAK: f64 = 8.0;
pub const LEAD_MS: f64 = 200.0;
pub const TAIL_MS: f64 = 800.0;
/// Horizontal spacing of the two fingers in two-finger suite gestures.
pub const TWO_FINGER_OFFSET: f64 = 8.0;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("script times must be nondecreasing (entry {0})")]
    TimeOrder(usize),
    #[error("at most two fingers per entry (entry {0} has {1})")]
    TooManyFingers(usize, usize),
    #[error("finger outside the pad or with bad peak/sigma at entry {0}")]
    BadFinger(usize),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("unknown gesture class {0:?}")]
    UnknownClass(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FingerModel {
    pub center: Point,
    #[serde(default = "default_peak")]
    pub peak: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
}

fn default_peak() -> f64 {
    200.0
}

fn default_sigma() -> f64 {
    1.2
}

impl FingerModel {
    pub fn at(x: f64, y: f64) -> Self {
        Self { center: Point::new(x, y), peak: default_peak(), sigma: default_sigma() }
    }

    fn valid(&self) -> bool {
        let max = (GRID - 1) as f64;
        (0.0..=max).contains(&self.center.x)
            && (0.0..=max).contains(&self.center.y)
            && self.peak >= 0.0
            && self.peak <= 255.0
            && self.sigma > 0.0
    }

    fn lerp(&self, other: &FingerModel, f: f64) -> FingerModel {
        FingerModel {
            center: self.center.lerp(other.center, f),
            peak: self.peak + (other.peak - self.peak) * f,
            sigma: self.sigma + (other.sigma - self.sigma) * f,
        }
    }
}

/// Add a rounded Gaussian footprint to `frame`, saturating at 255.
pub fn render_finger(frame: &mut PressureFrame, fm: &FingerModel) {
    if fm.peak <= 0.0 {
        return;
    }
    let two_s2 = 2.0 * fm.sigma * fm.sigma;
    // Beyond this radius the rounded contribution is zero.
    let reach = (two_s2 * (2.0 * fm.peak).ln().max(0.0)).sqrt();
    let lo = |c: f64| (c - reach).floor().max(0.0) as usize;
    let hi = |c: f64| ((c + reach).ceil() as usize).min(GRID - 1);
    for y in lo(fm.center.y)..=hi(fm.center.y) {
        for x in lo(fm.center.x)..=hi(fm.center.x) {
            let d2 = (x as f64 - fm.center.x).powi(2) + (y as f64 - fm.center.y).powi(2);
            let add = (fm.peak * (-d2 / two_s2).exp()).round() as u16;
            if add > 0 {
                let v = (frame.get(x, y) as u16 + add).min(255) as u8;
                frame.set(x, y, v);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Keyframe {
    pub t_ms: f64,
    pub fingers: Vec<FingerModel>,
}

/// Contacts over time. Between two keyframes with the same finger count the
/// fingers move linearly; otherwise the earlier keyframe holds until the next.
/// An empty finger set is a release.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureScript {
    #[serde(default)]
    pub label: Option<String>,
    pub timeline: Vec<Keyframe>,
}

impl GestureScript {
    pub fn validate(&self) -> Result<(), SynthError> {
        for (i, k) in self.timeline.iter().enumerate() {
            if i > 0 && k.t_ms < self.timeline[i - 1].t_ms {
                return Err(SynthError::TimeOrder(i));
            }
            if k.fingers.len() > 2 {
                return Err(SynthError::TooManyFingers(i, k.fingers.len()));
            }
            if !k.fingers.iter().all(FingerModel::valid) {
                return Err(SynthError::BadFinger(i));
            }
        }
        Ok(())
    }

    pub fn duration_ms(&self) -> f64 {
        self.timeline.last().map_or(0.0, |k| k.t_ms)
    }

    pub fn fingers_at(&self, t: f64) -> Vec<FingerModel> {
        let i = self.timeline.partition_point(|k| k.t_ms <= t);
        if i == 0 {
            return vec![];
        }
        let cur = &self.timeline[i - 1];
        match self.timeline.get(i) {
            Some(next) if next.fingers.len() == cur.fingers.len() && next.t_ms > cur.t_ms => {
                let f = (t - cur.t_ms) / (next.t_ms - cur.t_ms);
                cur.fingers.iter().zip(&next.fingers).map(|(a, b)| a.lerp(b, f)).collect()
            }
            _ => cur.fingers.clone(),
        }
    }

    /// Copy with every keyframe shifted by `dt` ms.
    pub fn shifted(&self, dt: f64) -> GestureScript {
        GestureScript {
            label: self.label.clone(),
            timeline: self.timeline.iter().map(|k| Keyframe { t_ms: k.t_ms + dt, ..k.clone() }).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Per-cell probability of replacing the reading with a random byte.
    pub salt_prob: f64,
    /// Per-frame probability that the second finger of a two-finger contact
    /// presses too lightly to clear the threshold.
    pub dropout_prob: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn none(seed: u64) -> Self {
        Self { salt_prob: 0.0, dropout_prob: 0.0, seed }
    }

    pub fn nominal(seed: u64) -> Self {
        Self { salt_prob: 0.002, dropout_prob: 0.05, seed }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        for p in [self.salt_prob, self.dropout_prob] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SynthError::BadProbability(p));
            }
        }
        Ok(())
    }
}

/// Timestamp (ms) of frame `k` at the sensor rate.
pub fn frame_time_ms(k: u64) -> f64 {
    k as f64 * 1000.0 / SENSOR_FPS as f64
}

fn add_salt(frame: &mut PressureFrame, p: f64, rng: &mut ChaCha8Rng) {
    if p <= 0.0 {
        return;
    }
    let skip = Geometric::new(p).expect("probability checked");
    let mut i = skip.sample(rng) as usize;
    while i < CELLS {
        frame.cells_mut()[i] = rng.random();
        i = i.saturating_add(1 + skip.sample(rng) as usize);
    }
}

/// Render a script at 60 FPS from t = 0 through its last keyframe.
pub fn script_to_stream(script: &GestureScript, noise: &NoiseModel) -> Result<Vec<PressureFrame>, SynthError> {
    script.validate()?;
    noise.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let end = script.duration_ms();
    let mut frames = vec![];
    let mut k = 0u64;
    while frame_time_ms(k) <= end + 1e-9 {
        let t = frame_time_ms(k);
        let mut frame = PressureFrame::zeroed(k as u16, t.floor() as u32);
        for (i, f) in script.fingers_at(t).iter().enumerate() {
            let mut f = *f;
            if i > 0 && noise.dropout_prob > 0.0 && rng.random_bool(noise.dropout_prob) {
                f.peak = f.peak.min(DROPOUT_PEAK);
            }
            render_finger(&mut frame, &f);
        }
        add_salt(&mut frame, noise.salt_prob, &mut rng);
        frames.push(frame);
        k += 1;
    }
    Ok(frames)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Tap,
    DoubleTap,
    LongPress,
}

fn parse_class(label: &str) -> Result<(usize, char, Kind), SynthError> {
    let bad = || SynthError::UnknownClass(label.to_string());
    if !CLASS_LABELS.contains(&label) {
        return Err(bad());
    }
    let parts: Vec<&str> = label.split('-').collect();
    let fingers = if parts[0] == "T" { 2 } else { 1 };
    let zone = parts[1].chars().next().ok_or_else(bad)?;
    let kind = match parts[2] {
        "T" => Kind::Tap,
        "DT" => Kind::DoubleTap,
        _ => Kind::LongPress,
    };
    Ok((fingers, zone, kind))
}

fn zone_anchor(zone: char, rng: &mut ChaCha8Rng) -> Point {
    let mut j = || rng.random_range(-1.5..=1.5);
    let c = 19.5;
    match zone {
        'L' => Point::new(7.0 + j(), c + j()),
        'R' => Point::new(32.0 + j(), c + j()),
        'T' => Point::new(c + j(), 7.0 + j()),
        'B' => Point::new(c + j(), 32.0 + j()),
        _ => Point::new(c + 2.0 * j(), c + 2.0 * j()),
    }
}

/// One randomized instance of a suite class, starting after a short idle
/// lead and ending after an idle tail.
pub fn class_script(label: &str, rng: &mut ChaCha8Rng) -> Result<GestureScript, SynthError> {
    let (fingers, zone, kind) = parse_class(label)?;
    let anchor = zone_anchor(zone, rng);
    let peak = rng.random_range(170.0..=230.0);
    let sigma = rng.random_range(1.0..=1.4);
    let finger = |c: Point| FingerModel { center: c, peak, sigma };
    let set: Vec<FingerModel> = if fingers == 1 {
        vec![finger(anchor)]
    } else {
        let h = TWO_FINGER_OFFSET / 2.0;
        vec![finger(Point::new(anchor.x - h, anchor.y)), finger(Point::new(anchor.x + h, anchor.y))]
    };
    let mut timeline = vec![Keyframe { t_ms: LEAD_MS, fingers: set.clone() }];
    let mut t = LEAD_MS;
    match kind {
        Kind::Tap => t += rng.random_range(60.0..=120.0),
        Kind::LongPress => t += rng.random_range(1150.0..=1600.0),
        Kind::DoubleTap => {
            t += rng.random_range(60.0..=120.0);
            timeline.push(Keyframe { t_ms: t, fingers: vec![] });
            t += rng.random_range(150.0..=350.0);
            timeline.push(Keyframe { t_ms: t, fingers: set.clone() });
            t += rng.random_range(60.0..=120.0);
        }
    }
    timeline.push(Keyframe { t_ms: t, fingers: vec![] });
    timeline.push(Keyframe { t_ms: t + TAIL_MS, fingers: vec![] });
    Ok(GestureScript { label: Some(label.to_string()), timeline })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub script: GestureScript,
    pub truth: Vec<TruthLabel>,
}

/// `per_class` instances of each of the twelve classes, interleaved
/// class by class, concatenated into one script.
pub fn gesture_suite(per_class: usize, seed: u64) -> Suite {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut timeline = vec![];
    let mut truth = vec![];
    let mut offset = 0.0;
    for round in 0..per_class {
        for (c, label) in CLASS_LABELS.iter().enumerate() {
            let s = class_script(label, &mut rng).expect("suite labels are valid").shifted(offset);
            let end = s.duration_ms();
            truth.push(TruthLabel {
                trial: round * CLASS_LABELS.len() + c,
                label: label.to_string(),
                t_start: offset.ceil() as u64,
                t_end: end.ceil() as u64,
            });
            timeline.extend(s.timeline);
            offset = end;
        }
    }
    Suite { script: GestureScript { label: None, timeline }, truth }
}

/// Closed canvas outline traced by one finger at `speed` pad cells per
/// second, optionally with Gaussian hand tremor of `tremor_sigma` canvas
/// units added per frame.
pub fn tracer_script(
    outline: &[Point],
    canvas: &Canvas,
    speed: f64,
    tremor: Option<(f64, u64)>,
) -> GestureScript {
    let pad: Vec<Point> = outline.iter().chain(outline.first()).map(|&c| canvas.canvas_to_pad(c)).collect();
    let lens: Vec<f64> = pad.windows(2).map(|w| w[0].dist(w[1])).collect();
    let total: f64 = lens.iter().sum();
    let frame_ms = 1000.0 / SENSOR_FPS as f64;
    let steps = (total / speed * SENSOR_FPS as f64).ceil() as usize;
    let scale = Point::new(canvas.max_x() / (GRID - 1) as f64, canvas.max_y() / (GRID - 1) as f64);
    let mut noise = tremor.map(|(sigma, seed)| (Normal::new(0.0, sigma).expect("finite sigma"), ChaCha8Rng::seed_from_u64(seed)));
    let max = (GRID - 1) as f64;
    let mut timeline = vec![];
    for k in 0..=steps {
        let mut remaining = total * k as f64 / steps as f64;
        let mut p = *pad.last().expect("outline");
        for (w, &len) in pad.windows(2).zip(&lens) {
            if remaining <= len && len > 0.0 {
                p = w[0].lerp(w[1], remaining / len);
                break;
            }
            remaining -= len;
        }
        if let Some((dist, rng)) = noise.as_mut() {
            p = Point::new(p.x + dist.sample(rng) / scale.x, p.y + dist.sample(rng) / scale.y);
        }
        let p = Point::new(p.x.clamp(0.0, max), p.y.clamp(0.0, max));
        timeline.push(Keyframe { t_ms: LEAD_MS + k as f64 * frame_ms, fingers: vec![FingerModel::at(p.x, p.y)] });
    }
    let end = LEAD_MS + steps as f64 * frame_ms + frame_ms / 2.0;
    timeline.push(Keyframe { t_ms: end, fingers: vec![] });
    timeline.push(Keyframe { t_ms: end + TAIL_MS, fingers: vec![] });
    GestureScript { label: Some("trace".into()), timeline }
}

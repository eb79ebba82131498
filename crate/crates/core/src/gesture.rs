//! Timed gesture state machine over voted touch observations.
//!
//! A contact starts when the voted finger count leaves zero and ends when it
//! returns to zero. Its finger count is the largest count seen while it
//! lasts. Short contacts become taps (paired into double taps when a second
//! one starts soon enough), stationary contacts held long enough become long
//! presses with periodic hold ticks, and contacts that wander past the drag
//! radius become drags. Stationary contacts released between the tap and
//! long-press limits produce nothing.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framestream::GRID;
use crate::geom::Point;
use crate::touchdetect::TouchObservation;

/// Milliseconds since stream start.
pub type Millis = u64;

#[derive(Debug, Error, PartialEq)]
pub enum GestureError {
    #[error("position ({0}, {1}) is outside the pad")]
    OutOfRange(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Zone {
    Left,
    Right,
    Top,
    Bottom,
    Any,
}

impl Zone {
    pub fn abbrev(self) -> &'static str {
        match self {
            Zone::Left => "L",
            Zone::Right => "R",
            Zone::Top => "T",
            Zone::Bottom => "B",
            Zone::Any => "*",
        }
    }
}

const PAD_CENTER: f64 = (GRID as f64 - 1.0) / 2.0;

/// Quadrant partition of the pad along its diagonals; diagonal ties go to
/// Left or Right.
pub fn classify_zone(p: Point) -> Result<Zone, GestureError> {
    let max = (GRID - 1) as f64;
    if !(0.0..=max).contains(&p.x) || !(0.0..=max).contains(&p.y) {
        return Err(GestureError::OutOfRange(p.x, p.y));
    }
    let dx = p.x - PAD_CENTER;
    let dy = p.y - PAD_CENTER;
    Ok(if dx.abs() >= dy.abs() {
        if dx < 0.0 {
            Zone::Left
        } else {
            Zone::Right
        }
    } else if dy < 0.0 {
        Zone::Top
    } else {
        Zone::Bottom
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GestureKind {
    Tap,
    DoubleTap,
    LongPressStart,
    LongPressHold,
    LongPressEnd,
    DragStart,
    DragMove,
    DragEnd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureEvent {
    pub kind: GestureKind,
    pub fingers: u8,
    pub zone: Zone,
    /// Calibrated pad position (two-finger contacts use the midpoint).
    pub position: Point,
    /// Sub-cell position from blob centroids; what strokes are drawn from.
    pub fine_position: Point,
    pub t_start: Millis,
    pub t_end: Millis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GestureConfig {
    pub tap_ms: Millis,
    pub double_window_ms: Millis,
    pub longpress_ms: Millis,
    pub drag_cells: f64,
    pub hold_cycle_ms: Millis,
}

impl Default for GestureConfig {
    fn default() -> Self {
        Self { tap_ms: 150, double_window_ms: 500, longpress_ms: 1000, drag_cells: 2.0, hold_cycle_ms: 800 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Idle,
    Touching,
    AwaitSecondTap,
    Pressing,
    Dragging,
}

#[derive(Debug, Clone, PartialEq)]
struct Contact {
    start: Millis,
    fingers: usize,
    anchor: Point,
    fine_anchor: Point,
    last: Point,
    last_fine: Point,
    max_disp: f64,
    trail: Vec<(Point, Point)>,
    rejected: bool,
}

impl Contact {
    fn begin(now: Millis, fingers: usize, pos: Point, fine: Point) -> Self {
        Self {
            start: now,
            fingers,
            anchor: pos,
            fine_anchor: fine,
            last: pos,
            last_fine: fine,
            max_disp: 0.0,
            trail: vec![(pos, fine)],
            rejected: fingers > 2,
        }
    }

    fn zone(&self) -> Zone {
        classify_zone(self.anchor).unwrap_or(Zone::Any)
    }

    fn event(&self, kind: GestureKind, position: Point, fine: Point, t_end: Millis) -> GestureEvent {
        GestureEvent {
            kind,
            fingers: self.fingers as u8,
            zone: self.zone(),
            position,
            fine_position: fine,
            t_start: self.start,
            t_end,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct PendingTap {
    fingers: usize,
    zone: Zone,
    position: Point,
    fine_position: Point,
    t_start: Millis,
    t_end: Millis,
}

impl PendingTap {
    fn to_event(&self) -> GestureEvent {
        GestureEvent {
            kind: GestureKind::Tap,
            fingers: self.fingers as u8,
            zone: self.zone,
            position: self.position,
            fine_position: self.fine_position,
            t_start: self.t_start,
            t_end: self.t_end,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
enum State {
    #[default]
    Idle,
    AwaitSecondTap(PendingTap),
    Touching { contact: Contact, pending: Option<PendingTap> },
    Pressing { contact: Contact, next_hold: Millis },
    Dragging { contact: Contact },
}

/// One recognizer per input stream.
#[derive(Debug, Clone, PartialEq)]
pub struct GestureRecognizer {
    cfg: GestureConfig,
    state: State,
}

impl GestureRecognizer {
    pub fn new(cfg: GestureConfig) -> Self {
        Self { cfg, state: State::Idle }
    }

    pub fn config(&self) -> &GestureConfig {
        &self.cfg
    }

    pub fn phase(&self) -> Phase {
        match self.state {
            State::Idle => Phase::Idle,
            State::AwaitSecondTap(_) => Phase::AwaitSecondTap,
            State::Touching { .. } => Phase::Touching,
            State::Pressing { .. } => Phase::Pressing,
            State::Dragging { .. } => Phase::Dragging,
        }
    }

    /// Initial touch position of the current contact, if any.
    pub fn anchor(&self) -> Option<Point> {
        match &self.state {
            State::Touching { contact, .. } | State::Pressing { contact, .. } | State::Dragging { contact } => {
                Some(contact.anchor)
            }
            _ => None,
        }
    }

    /// Feed one observation taken at `now`; observations must arrive in
    /// nondecreasing time.
    pub fn step(&mut self, obs: &TouchObservation, now: Millis) -> Vec<GestureEvent> {
        let mut out = Vec::new();
        let count = obs.finger_count;
        let pos = obs.position().unwrap_or_default();
        let fine = obs.fine_position().unwrap_or(pos);
        let cfg = self.cfg;

        self.state = match std::mem::take(&mut self.state) {
            State::Idle if count > 0 => State::Touching { contact: Contact::begin(now, count, pos, fine), pending: None },
            State::Idle => State::Idle,
            State::AwaitSecondTap(tap) => {
                let open = now.saturating_sub(tap.t_end) <= cfg.double_window_ms;
                if count > 0 {
                    let pending = if open {
                        Some(tap)
                    } else {
                        out.push(tap.to_event());
                        None
                    };
                    State::Touching { contact: Contact::begin(now, count, pos, fine), pending }
                } else if open {
                    State::AwaitSecondTap(tap)
                } else {
                    out.push(tap.to_event());
                    State::Idle
                }
            }
            State::Touching { contact, pending } if count == 0 => release_touch(contact, pending, now, &cfg, &mut out),
            State::Touching { mut contact, mut pending } => {
                if count > contact.fingers {
                    contact = Contact { start: contact.start, ..Contact::begin(now, count, pos, fine) };
                } else if count == contact.fingers {
                    contact.max_disp = contact.max_disp.max(pos.dist(contact.anchor));
                    contact.last = pos;
                    contact.last_fine = fine;
                    contact.trail.push((pos, fine));
                }
                let held = now.saturating_sub(contact.start);
                if held >= cfg.tap_ms {
                    // No longer a tap: any first tap waiting for a partner stands alone.
                    out.extend(pending.take().map(|p| p.to_event()));
                }
                if contact.rejected {
                    State::Touching { contact, pending }
                } else if contact.max_disp > cfg.drag_cells {
                    out.extend(pending.take().map(|p| p.to_event()));
                    out.push(contact.event(GestureKind::DragStart, contact.anchor, contact.fine_anchor, now));
                    for &(p, f) in &contact.trail[1..] {
                        out.push(contact.event(GestureKind::DragMove, p, f, now));
                    }
                    contact.trail.clear();
                    State::Dragging { contact }
                } else if held >= cfg.longpress_ms {
                    out.push(contact.event(GestureKind::LongPressStart, contact.anchor, contact.fine_anchor, now));
                    contact.trail.clear();
                    State::Pressing { contact, next_hold: now + cfg.hold_cycle_ms }
                } else {
                    State::Touching { contact, pending }
                }
            }
            State::Pressing { contact, .. } if count == 0 => {
                out.push(contact.event(GestureKind::LongPressEnd, contact.anchor, contact.fine_anchor, now));
                State::Idle
            }
            State::Pressing { contact, mut next_hold } => {
                while now >= next_hold {
                    out.push(contact.event(GestureKind::LongPressHold, contact.anchor, contact.fine_anchor, now));
                    next_hold += cfg.hold_cycle_ms.max(1);
                }
                State::Pressing { contact, next_hold }
            }
            State::Dragging { contact } if count == 0 => {
                out.push(contact.event(GestureKind::DragEnd, contact.last, contact.last_fine, now));
                State::Idle
            }
            State::Dragging { mut contact } => {
                if count == contact.fingers {
                    contact.last = pos;
                    contact.last_fine = fine;
                    out.push(contact.event(GestureKind::DragMove, pos, fine, now));
                }
                State::Dragging { contact }
            }
        };
        out
    }

    /// End of stream: close whatever is open as if every finger lifted at `now`
    /// and the double-tap window expired.
    pub fn finish(&mut self, now: Millis) -> Vec<GestureEvent> {
        let mut out = self.step(&TouchObservation::empty(vec![]), now);
        if let State::AwaitSecondTap(tap) = std::mem::take(&mut self.state) {
            out.push(tap.to_event());
        }
        out
    }
}

fn release_touch(
    contact: Contact,
    pending: Option<PendingTap>,
    now: Millis,
    cfg: &GestureConfig,
    out: &mut Vec<GestureEvent>,
) -> State {
    let duration = now.saturating_sub(contact.start);
    if contact.rejected || duration >= cfg.tap_ms {
        out.extend(pending.map(|p| p.to_event()));
        return State::Idle;
    }
    let tap = PendingTap {
        fingers: contact.fingers,
        zone: contact.zone(),
        position: contact.anchor,
        fine_position: contact.fine_anchor,
        t_start: contact.start,
        t_end: now,
    };
    match pending {
        Some(first) if first.fingers == tap.fingers => {
            out.push(GestureEvent {
                kind: GestureKind::DoubleTap,
                fingers: first.fingers as u8,
                zone: first.zone,
                position: first.position,
                fine_position: first.fine_position,
                t_start: first.t_start,
                t_end: now,
            });
            State::Idle
        }
        Some(first) => {
            out.push(first.to_event());
            State::AwaitSecondTap(tap)
        }
        None => State::AwaitSecondTap(tap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::touchdetect::TouchPoint;

    const FRAME: f64 = 1000.0 / 60.0;

    fn obs(points: &[(f64, f64)]) -> TouchObservation {
        TouchObservation {
            finger_count: points.len(),
            points: points.iter().map(|&(x, y)| TouchPoint { x, y, pressure: 200 }).collect(),
            centroids: points.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            window_seqs: vec![],
        }
    }

    /// Drive the recognizer at 60 FPS; `script(t)` gives the touch points at t ms.
    fn run(until_ms: f64, script: impl Fn(f64) -> Vec<(f64, f64)>) -> Vec<GestureEvent> {
        let mut r = GestureRecognizer::new(GestureConfig::default());
        let mut out = vec![];
        let mut k = 0u64;
        loop {
            let t = k as f64 * FRAME;
            if t > until_ms {
                break;
            }
            out.extend(r.step(&obs(&script(t)), t.round() as Millis));
            k += 1;
        }
        out
    }

    fn kinds(events: &[GestureEvent]) -> Vec<GestureKind> {
        events.iter().map(|e| e.kind).collect()
    }

    #[test]
    fn zone_axis_extremes_and_diagonal() {
        assert_eq!(classify_zone(Point::new(0.0, 19.5)), Ok(Zone::Left));
        assert_eq!(classify_zone(Point::new(19.5, 0.0)), Ok(Zone::Top));
        assert_eq!(classify_zone(Point::new(39.0, 19.5)), Ok(Zone::Right));
        assert_eq!(classify_zone(Point::new(19.5, 39.0)), Ok(Zone::Bottom));
        assert_eq!(classify_zone(Point::new(10.0, 10.0)), Ok(Zone::Left));
        assert_eq!(classify_zone(Point::new(29.0, 29.0)), Ok(Zone::Right));
        assert_eq!(classify_zone(Point::new(19.5, 19.5)), Ok(Zone::Right));
        assert_eq!(classify_zone(Point::new(-0.1, 3.0)), Err(GestureError::OutOfRange(-0.1, 3.0)));
    }

    #[test]
    fn short_contact_is_tap_after_window() {
        let ev = run(800.0, |t| if (50.0..150.0).contains(&t) { vec![(5.0, 20.0)] } else { vec![] });
        assert_eq!(kinds(&ev), vec![GestureKind::Tap]);
        assert_eq!(ev[0].zone, Zone::Left);
        assert_eq!(ev[0].fingers, 1);
        assert!(ev[0].t_end - ev[0].t_start < 150);
    }

    #[test]
    fn tap_waits_for_double_window() {
        let ev = run(500.0, |t| if (50.0..150.0).contains(&t) { vec![(5.0, 20.0)] } else { vec![] });
        assert!(ev.is_empty(), "tap emitted before its window closed: {ev:?}");
    }

    #[test]
    fn two_quick_taps_are_one_double_tap() {
        let ev = run(1500.0, |t| {
            if (50.0..150.0).contains(&t) || (450.0..550.0).contains(&t) {
                vec![(20.0, 20.0)]
            } else {
                vec![]
            }
        });
        assert_eq!(kinds(&ev), vec![GestureKind::DoubleTap]);
    }

    #[test]
    fn late_second_tap_gives_two_taps() {
        let ev = run(2000.0, |t| {
            if (50.0..150.0).contains(&t) || (750.0..850.0).contains(&t) {
                vec![(20.0, 20.0)]
            } else {
                vec![]
            }
        });
        assert_eq!(kinds(&ev), vec![GestureKind::Tap, GestureKind::Tap]);
    }

    #[test]
    fn long_press_start_and_end_times() {
        let ev = run(2000.0, |t| if (0.0..1200.0).contains(&t) { vec![(35.0, 20.0)] } else { vec![] });
        assert_eq!(kinds(&ev), vec![GestureKind::LongPressStart, GestureKind::LongPressEnd]);
        let start_at = ev[0].t_end - ev[0].t_start;
        assert!((1000..1000 + 17).contains(&start_at), "{start_at}");
        let held = ev[1].t_end - ev[1].t_start;
        assert!((1200..1200 + 17).contains(&held), "{held}");
        assert_eq!(ev[0].zone, Zone::Right);
    }

    #[test]
    fn hold_ticks_every_cycle() {
        let ev = run(3000.0, |t| if t < 2700.0 { vec![(3.0, 20.0)] } else { vec![] });
        assert_eq!(
            kinds(&ev),
            vec![
                GestureKind::LongPressStart,
                GestureKind::LongPressHold,
                GestureKind::LongPressHold,
                GestureKind::LongPressEnd
            ]
        );
    }

    #[test]
    fn dead_zone_contact_emits_nothing() {
        let ev = run(2000.0, |t| if (0.0..600.0).contains(&t) { vec![(20.0, 3.0)] } else { vec![] });
        assert!(ev.is_empty(), "{ev:?}");
    }

    #[test]
    fn moving_contact_is_drag() {
        let ev = run(1000.0, |t| if t < 500.0 { vec![(5.0 + t / 20.0, 20.0)] } else { vec![] });
        let k = kinds(&ev);
        assert_eq!(k[0], GestureKind::DragStart);
        assert_eq!(*k.last().unwrap(), GestureKind::DragEnd);
        assert!(k[1..k.len() - 1].iter().all(|&x| x == GestureKind::DragMove));
        assert_eq!(ev[0].position, Point::new(5.0, 20.0));
        // Every observation after the anchor shows up as a move.
        assert_eq!(k.len() - 2, 29);
    }

    #[test]
    fn two_finger_anchor_is_midpoint() {
        let ev = run(800.0, |t| if (50.0..150.0).contains(&t) { vec![(4.0, 18.0), (10.0, 18.0)] } else { vec![] });
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].fingers, 2);
        assert_eq!(ev[0].position, Point::new(7.0, 18.0));
        assert_eq!(ev[0].zone, Zone::Left);
    }

    #[test]
    fn second_finger_landing_late_relatches() {
        let ev = run(2000.0, |t| {
            if t < 30.0 {
                vec![(30.0, 20.0)]
            } else if t < 1300.0 {
                vec![(30.0, 20.0), (36.0, 20.0)]
            } else {
                vec![]
            }
        });
        assert_eq!(kinds(&ev), vec![GestureKind::LongPressStart, GestureKind::LongPressEnd]);
        assert_eq!(ev[0].fingers, 2);
        assert_eq!(ev[0].zone, Zone::Right);
    }

    #[test]
    fn three_fingers_are_ignored() {
        let ev = run(2000.0, |t| if t < 100.0 { vec![(5.0, 5.0), (20.0, 5.0), (35.0, 5.0)] } else { vec![] });
        assert!(ev.is_empty());
    }

    #[test]
    fn finish_flushes_pending_tap() {
        let mut r = GestureRecognizer::new(GestureConfig::default());
        r.step(&obs(&[(5.0, 20.0)]), 0);
        r.step(&obs(&[]), 100);
        assert_eq!(r.phase(), Phase::AwaitSecondTap);
        assert!(r.anchor().is_none());
        let ev = r.finish(120);
        assert_eq!(kinds(&ev), vec![GestureKind::Tap]);
        assert_eq!(r.phase(), Phase::Idle);
    }

    #[test]
    fn replay_is_deterministic() {
        let script = |t: f64| if (100.0..1400.0).contains(&t) { vec![(3.0 + t / 400.0, 20.0)] } else { vec![] };
        assert_eq!(run(2500.0, script), run(2500.0, script));
    }
}

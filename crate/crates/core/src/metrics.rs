//! Evaluation quantities: drawing error against a template, completion time,
//! the gesture confusion matrix and recognition accuracy.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;
use crate::gesture::{GestureEvent, GestureKind};

pub const CANVAS_CENTER: Point = Point::new(639.5, 359.5);

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("sample set is empty")]
    EmptySet,
    #[error("polyline has zero length or too few samples requested")]
    DegeneratePolyline,
    #[error("stroke log has no points")]
    EmptyLog,
    #[error("confusion matrix has no trials")]
    EmptyMatrix,
    #[error("unknown class {0:?}")]
    UnknownClass(String),
}

/// Mean distance from each drawing sample to its nearest template sample.
/// The average runs over the drawing; the sets may differ in size.
pub fn drawing_error(drawing: &[Point], template: &[Point]) -> Result<f64, MetricsError> {
    if drawing.is_empty() || template.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    let total: f64 = drawing
        .iter()
        .map(|d| template.iter().map(|t| d.dist(*t)).fold(f64::INFINITY, f64::min))
        .sum();
    Ok(total / drawing.len() as f64)
}

/// `n` samples equally spaced by arc length. Open polylines include both
/// endpoints; closed ones start at the first vertex and step `perimeter / n`
/// around the loop.
pub fn resample_polyline(poly: &[Point], n: usize, closed: bool) -> Result<Vec<Point>, MetricsError> {
    if n < 2 || poly.len() < 2 {
        return Err(MetricsError::DegeneratePolyline);
    }
    let mut pts = poly.to_vec();
    if closed && pts.first() != pts.last() {
        pts.push(pts[0]);
    }
    let seg: Vec<f64> = pts.windows(2).map(|w| w[0].dist(w[1])).collect();
    let total: f64 = seg.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(MetricsError::DegeneratePolyline);
    }
    let spacing = if closed { total / n as f64 } else { total / (n - 1) as f64 };
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    let mut before = 0.0;
    for k in 0..n {
        let target = k as f64 * spacing;
        while i < seg.len() - 1 && before + seg[i] < target {
            before += seg[i];
            i += 1;
        }
        let f = if seg[i] > 0.0 { ((target - before) / seg[i]).clamp(0.0, 1.0) } else { 0.0 };
        out.push(pts[i].lerp(pts[i + 1], f));
    }
    if !closed {
        out[n - 1] = *pts.last().expect("non-empty");
    }
    Ok(out)
}

/// Seconds between the first and last timestamped point (ms) of a drawing.
pub fn completion_time(timestamps_ms: &[u64]) -> Result<f64, MetricsError> {
    let first = timestamps_ms.first().ok_or(MetricsError::EmptyLog)?;
    let last = timestamps_ms.last().ok_or(MetricsError::EmptyLog)?;
    Ok(last.saturating_sub(*first) as f64 / 1000.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Template {
    Rect,
    Triangle,
    Circle,
}

impl Template {
    pub const ALL: [Template; 3] = [Template::Rect, Template::Triangle, Template::Circle];

    pub fn name(self) -> &'static str {
        match self {
            Template::Rect => "rect",
            Template::Triangle => "tri",
            Template::Circle => "circle",
        }
    }

    pub fn parse(s: &str) -> Option<Template> {
        Template::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Closed outline in canvas units, centred on the canvas. The circle is
    /// a 720-gon, fine enough that resampling it is indistinguishable from
    /// sampling the true circle at the sizes used here.
    pub fn outline(self) -> Vec<Point> {
        let c = CANVAS_CENTER;
        match self {
            Template::Rect => vec![
                Point::new(c.x - 300.0, c.y - 200.0),
                Point::new(c.x + 300.0, c.y - 200.0),
                Point::new(c.x + 300.0, c.y + 200.0),
                Point::new(c.x - 300.0, c.y + 200.0),
            ],
            Template::Triangle => {
                let r = 500.0 / 3f64.sqrt();
                (0..3)
                    .map(|k| {
                        let a = (-90.0 + 120.0 * k as f64).to_radians();
                        Point::new(c.x + r * a.cos(), c.y + r * a.sin())
                    })
                    .collect()
            }
            Template::Circle => (0..720)
                .map(|k| {
                    let a = (k as f64 * 0.5).to_radians();
                    Point::new(c.x + 250.0 * a.cos(), c.y + 250.0 * a.sin())
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeConfig {
    pub drawing_samples: usize,
    pub template_samples: usize,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self { drawing_samples: 256, template_samples: 2048 }
    }
}

/// Resample a drawn polyline and a closed template outline, then score.
pub fn score_drawing(drawing: &[Point], template: &[Point], cfg: &DeConfig) -> Result<f64, MetricsError> {
    let d = resample_polyline(drawing, cfg.drawing_samples, false)?;
    let t = resample_polyline(template, cfg.template_samples, true)?;
    drawing_error(&d, &t)
}

/// Gesture classes of the evaluation suite, in matrix order.
pub const CLASS_LABELS: [&str; 12] = [
    "O-L-T", "O-R-T", "O-T-T", "O-B-T", "O-L-LP", "O-R-LP", "O-T-LP", "O-B-LP", "O-*-DT", "T-*-T", "T-L-LP", "T-R-LP",
];

pub fn class_index(label: &str) -> Option<usize> {
    CLASS_LABELS.iter().position(|l| *l == label)
}

/// Counts of (true class, predicted class). Trials whose prediction is not
/// one of the classes land in `missed` for their row, so each row still sums
/// to the number of trials of that class.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 12]; 12],
    pub missed: [u64; 12],
}

impl ConfusionMatrix {
    pub fn record(&mut self, truth: &str, predicted: Option<&str>) -> Result<(), MetricsError> {
        let t = class_index(truth).ok_or_else(|| MetricsError::UnknownClass(truth.into()))?;
        match predicted.and_then(class_index) {
            Some(p) => self.counts[t][p] += 1,
            None => self.missed[t] += 1,
        }
        Ok(())
    }

    pub fn row_total(&self, row: usize) -> u64 {
        self.counts[row].iter().sum::<u64>() + self.missed[row]
    }

    pub fn total(&self) -> u64 {
        (0..12).map(|r| self.row_total(r)).sum()
    }

    pub fn trace(&self) -> u64 {
        (0..12).map(|i| self.counts[i][i]).sum()
    }

    pub fn errors(&self) -> u64 {
        self.total() - self.trace()
    }

    /// Plain-text table with aligned columns.
    pub fn to_table(&self) -> String {
        let mut s = format!("{:>7}", "");
        for l in CLASS_LABELS {
            s.push_str(&format!("{l:>7}"));
        }
        s.push_str(&format!("{:>7}\n", "miss"));
        for (r, l) in CLASS_LABELS.iter().enumerate() {
            s.push_str(&format!("{l:>7}"));
            for c in 0..12 {
                s.push_str(&format!("{:>7}", self.counts[r][c]));
            }
            s.push_str(&format!("{:>7}\n", self.missed[r]));
        }
        s
    }
}

/// Ground truth for one trial of a suite stream; `t_end` is exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthLabel {
    pub trial: usize,
    pub label: String,
    pub t_start: u64,
    pub t_end: u64,
}

/// Events that decide what a trial was recognized as.
pub fn is_classifying(kind: GestureKind) -> bool {
    matches!(kind, GestureKind::Tap | GestureKind::DoubleTap | GestureKind::LongPressStart | GestureKind::DragStart)
}

/// Class label of a classifying event, in the `fingers-zone-kind` notation.
/// Combinations outside the twelve classes still get a label (and count as misses).
pub fn gesture_label(ev: &GestureEvent) -> String {
    let f = if ev.fingers >= 2 { "T" } else { "O" };
    let z = ev.zone.abbrev();
    match (ev.kind, ev.fingers) {
        (GestureKind::Tap, 1) => format!("O-{z}-T"),
        (GestureKind::Tap, _) => "T-*-T".to_string(),
        (GestureKind::DoubleTap, _) => format!("{f}-*-DT"),
        (GestureKind::LongPressStart, _) => format!("{f}-{z}-LP"),
        (GestureKind::DragStart, _) => format!("{f}-{z}-DRAG"),
        (k, _) => format!("{f}-{z}-{k:?}"),
    }
}

/// First classifying event starting inside each trial window decides its row entry.
pub fn score_events(events: &[GestureEvent], truth: &[TruthLabel]) -> Result<ConfusionMatrix, MetricsError> {
    let mut starts: Vec<&GestureEvent> = events.iter().filter(|e| is_classifying(e.kind)).collect();
    starts.sort_by_key(|e| e.t_start);
    let mut cm = ConfusionMatrix::default();
    for tr in truth {
        let i = starts.partition_point(|e| e.t_start < tr.t_start);
        let pred = starts.get(i).filter(|e| e.t_start < tr.t_end).map(|e| gesture_label(e));
        cm.record(&tr.label, pred.as_deref())?;
    }
    Ok(cm)
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64, MetricsError> {
    match cm.total() {
        0 => Err(MetricsError::EmptyMatrix),
        n => Ok(cm.trace() as f64 / n as f64),
    }
}

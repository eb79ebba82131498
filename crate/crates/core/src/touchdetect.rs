//! Finger blobs, touch points, and the n-frame voting window.
//!
//! Blobs are grown from the strongest unassigned cell: a neighbour (8-way)
//! joins when its pressure is more than half of the cell it is reached from.
//! Fewer than five cells and the whole blob is dropped, though its cells stay
//! consumed. Seeding from the maximum makes the result independent of scan
//! order and makes the seed the blob's touch point.
//!
//! Nonzero cells bordering a finished blob that failed the half-pressure test
//! are its margin: they are consumed too and never seed a blob of their own.
//! A fingertip's pressure falls off by more than half per cell near its rim,
//! so without this the rim would come back as a second, ring-shaped finger.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framestream::{PressureFrame, CELLS, GRID};
use crate::geom::{self, Point};

pub const MIN_BLOB_CELLS: usize = 5;
pub const DEFAULT_VOTE_N: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TouchError {
    #[error("voting window is empty")]
    EmptyWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub x: usize,
    pub y: usize,
    pub pressure: u8,
}

/// A connected region attributed to one finger. `cells` is sorted by (y, x).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blob {
    pub cells: Vec<Cell>,
    pub peak: Cell,
}

impl Blob {
    /// Build a blob from member cells; the peak is recomputed.
    pub fn from_cells(mut cells: Vec<Cell>) -> Option<Blob> {
        cells.sort_by_key(|c| (c.y, c.x));
        let peak = peak_of(&cells)?;
        Some(Blob { cells, peak })
    }

    /// Pressure-weighted centre of the member cells, in cell units.
    pub fn centroid(&self) -> Point {
        let mut w = 0.0;
        let mut acc = Point::ORIGIN;
        for c in &self.cells {
            let p = c.pressure as f64;
            acc = acc + Point::new(c.x as f64, c.y as f64) * p;
            w += p;
        }
        if w == 0.0 {
            Point::new(self.peak.x as f64, self.peak.y as f64)
        } else {
            acc * (1.0 / w)
        }
    }
}

fn peak_of(cells: &[Cell]) -> Option<Cell> {
    cells.iter().copied().min_by_key(|c| (std::cmp::Reverse(c.pressure), c.y, c.x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TouchPoint {
    pub x: f64,
    pub y: f64,
    pub pressure: u8,
}

impl TouchPoint {
    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Kept blobs plus the regions dropped for being too small.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Detection {
    pub blobs: Vec<Blob>,
    /// Each dropped region's cells, sorted by (y, x), in seed order.
    pub discarded: Vec<Vec<Cell>>,
}

/// Grow all blobs of a preprocessed frame.
///
/// Output is ordered by peak pressure descending, then peak (y, x) ascending.
pub fn detect_blobs(frame: &PressureFrame) -> Vec<Blob> {
    detect(frame).blobs
}

/// [`detect_blobs`], also reporting the discarded regions.
pub fn detect(frame: &PressureFrame) -> Detection {
    let mut seeds: Vec<(u8, usize)> = frame
        .cells()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p != 0)
        .map(|(i, &p)| (p, i))
        .collect();
    // Row-major index order is (y, x) order.
    seeds.sort_by_key(|&(p, i)| (std::cmp::Reverse(p), i));

    let cells = frame.cells();
    let mut assigned = [false; CELLS];
    let mut queue = VecDeque::new();
    let mut out = Detection::default();
    for &(_, seed) in &seeds {
        if assigned[seed] {
            continue;
        }
        assigned[seed] = true;
        queue.push_back(seed);
        let mut members = Vec::new();
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % GRID, i / GRID);
            let from = cells[i];
            members.push(Cell { x, y, pressure: from });
            for (nx, ny) in neighbours8(x, y) {
                let j = ny * GRID + nx;
                let p = cells[j];
                if !assigned[j] && p != 0 && 2 * p as u16 > from as u16 {
                    assigned[j] = true;
                    queue.push_back(j);
                }
            }
        }
        for c in &members {
            for (nx, ny) in neighbours8(c.x, c.y) {
                let j = ny * GRID + nx;
                if cells[j] != 0 {
                    assigned[j] = true;
                }
            }
        }
        if members.len() >= MIN_BLOB_CELLS {
            out.blobs.extend(Blob::from_cells(members));
        } else {
            members.sort_by_key(|c| (c.y, c.x));
            out.discarded.push(members);
        }
    }
    out
}

fn neighbours8(x: usize, y: usize) -> impl Iterator<Item = (usize, usize)> {
    let (x, y) = (x as isize, y as isize);
    (-1..=1)
        .flat_map(move |dy| (-1..=1).map(move |dx| (x + dx, y + dy)))
        .filter(move |&(nx, ny)| {
            (nx, ny) != (x, y) && nx >= 0 && ny >= 0 && nx < GRID as isize && ny < GRID as isize
        })
        .map(|(nx, ny)| (nx as usize, ny as usize))
}

/// The blob's highest-pressure cell; ties go to the smallest (y, x).
pub fn touch_point_of(blob: &Blob) -> TouchPoint {
    let c = peak_of(&blob.cells).unwrap_or(blob.peak);
    TouchPoint { x: c.x as f64, y: c.y as f64, pressure: c.pressure }
}

/// Blob list of one frame, tagged with its sequence number.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBlobs {
    pub seq: u16,
    pub blobs: Vec<Blob>,
}

/// Voted finger count and calibrated positions over one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TouchObservation {
    pub finger_count: usize,
    /// Averaged peak-cell touch points, one per finger.
    pub points: Vec<TouchPoint>,
    /// Averaged blob centroids, parallel to `points`; sub-cell positions for strokes.
    pub centroids: Vec<Point>,
    pub window_seqs: Vec<u16>,
}

impl TouchObservation {
    pub fn empty(window_seqs: Vec<u16>) -> Self {
        Self { finger_count: 0, points: vec![], centroids: vec![], window_seqs }
    }

    /// Mean of the calibrated touch points (the two-finger anchor).
    pub fn position(&self) -> Option<Point> {
        geom::mean(self.points.iter().map(TouchPoint::position))
    }

    pub fn fine_position(&self) -> Option<Point> {
        geom::mean(self.centroids.iter().copied())
    }
}

/// Modal count; among tied counts the one seen most recently wins.
fn modal_count(counts: &[usize]) -> usize {
    let mut best = (0usize, 0usize, 0usize); // (freq, last index, count)
    for (i, &c) in counts.iter().enumerate() {
        let freq = counts.iter().filter(|&&o| o == c).count();
        if (freq, i) > (best.0, best.1) {
            best = (freq, i, c);
        }
    }
    best.2
}

/// Greedy closest-pair matching of `other` onto `reference`; returns, for
/// each reference index, the matched index into `other`.
fn match_nearest(reference: &[Point], other: &[Point]) -> Vec<Option<usize>> {
    let mut pairs: Vec<(f64, usize, usize)> = reference
        .iter()
        .enumerate()
        .flat_map(|(r, rp)| other.iter().enumerate().map(move |(o, op)| (rp.dist(*op), r, o)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut out = vec![None; reference.len()];
    let mut used = vec![false; other.len()];
    for (_, r, o) in pairs {
        if out[r].is_none() && !used[o] {
            out[r] = Some(o);
            used[o] = true;
        }
    }
    out
}

/// Vote over a window of per-frame blob lists.
pub fn observe(window: &[FrameBlobs]) -> Result<TouchObservation, TouchError> {
    if window.is_empty() {
        return Err(TouchError::EmptyWindow);
    }
    let counts: Vec<usize> = window.iter().map(|f| f.blobs.len()).collect();
    let mode = modal_count(&counts);
    let window_seqs = window.iter().map(|f| f.seq).collect();
    if mode == 0 {
        return Ok(TouchObservation::empty(window_seqs));
    }

    let modal: Vec<&FrameBlobs> = window.iter().filter(|f| f.blobs.len() == mode).collect();
    let reference = modal[modal.len() - 1];
    let ref_points: Vec<Point> = reference.blobs.iter().map(|b| touch_point_of(b).position()).collect();

    let mut sum_pt = vec![Point::ORIGIN; mode];
    let mut sum_c = vec![Point::ORIGIN; mode];
    let mut sum_p = vec![0u32; mode];
    for f in &modal {
        let pts: Vec<Point> = f.blobs.iter().map(|b| touch_point_of(b).position()).collect();
        for (r, o) in match_nearest(&ref_points, &pts).into_iter().enumerate() {
            let o = o.expect("modal frames share a blob count");
            let b = &f.blobs[o];
            sum_pt[r] = sum_pt[r] + pts[o];
            sum_c[r] = sum_c[r] + b.centroid();
            sum_p[r] += touch_point_of(b).pressure as u32;
        }
    }
    let k = modal.len() as f64;
    let points = (0..mode)
        .map(|r| {
            let p = sum_pt[r] * (1.0 / k);
            TouchPoint { x: p.x, y: p.y, pressure: (sum_p[r] as f64 / k).round() as u8 }
        })
        .collect();
    let centroids = sum_c.into_iter().map(|c| c * (1.0 / k)).collect();
    Ok(TouchObservation { finger_count: mode, points, centroids, window_seqs })
}

/// Sliding n-frame voting window for one stream.
#[derive(Debug, Clone)]
pub struct TouchTracker {
    n: usize,
    window: VecDeque<FrameBlobs>,
}

impl TouchTracker {
    pub fn new(n: usize) -> Self {
        Self { n: n.max(1), window: VecDeque::with_capacity(n.max(1)) }
    }

    /// Add one preprocessed frame; yields an observation once the window is full.
    pub fn push(&mut self, frame: &PressureFrame) -> Option<TouchObservation> {
        self.push_blobs(FrameBlobs { seq: frame.seq, blobs: detect_blobs(frame) })
    }

    pub fn push_blobs(&mut self, blobs: FrameBlobs) -> Option<TouchObservation> {
        if self.window.len() == self.n {
            self.window.pop_front();
        }
        self.window.push_back(blobs);
        if self.window.len() < self.n {
            return None;
        }
        let slice: Vec<FrameBlobs> = self.window.iter().cloned().collect();
        observe(&slice).ok()
    }

    pub fn reset(&mut self) {
        self.window.clear();
    }
}

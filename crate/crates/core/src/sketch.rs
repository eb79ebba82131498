//! The sketch document: assets made of strokes, the brush, the current tool,
//! and a bounded log of inverse operations for undo.
//!
//! Every successful mutating call pushes exactly one inverse entry, so
//! `undo` after any single mutation restores the previous document. Multi-call
//! edits driven by one drag (erasing along a path, dragging an asset) can be
//! bracketed with [`SketchDocument::begin_group`] / [`SketchDocument::end_group`]
//! to undo as one step.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anim::{AnimError, AnimationBinding};
use crate::command::MenuState;
use crate::framestream::GRID;
use crate::geom::{self, Point};

pub const SCHEMA_VERSION: u32 = 1;
pub const UNDO_CAPACITY: usize = 100;
pub const MIN_THICKNESS: f64 = 1.0;
pub const MAX_THICKNESS: f64 = 32.0;
pub const DEFAULT_ERASER_RADIUS: f64 = 8.0;
/// Picker grid is `PICKER_STEPS × PICKER_STEPS` (hue × saturation).
pub const PICKER_STEPS: u8 = 16;

#[derive(Debug, Error, PartialEq)]
pub enum SketchError {
    #[error("pad position ({0}, {1}) is outside the pad")]
    OutOfRange(f64, f64),
    #[error("stroke point without an open stroke")]
    PointWithoutBegin,
    #[error("operation needs {needed:?} mode, document is in {current:?}")]
    WrongMode { needed: Mode, current: Mode },
    #[error("document has no asset")]
    NoAsset,
    #[error("no binding at index {0}")]
    NoBinding(usize),
    #[error(transparent)]
    Anim(#[from] AnimError),
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("malformed document: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canvas {
    pub width: u32,
    pub height: u32,
}

impl Default for Canvas {
    fn default() -> Self {
        Self { width: 1280, height: 720 }
    }
}

impl Canvas {
    pub fn max_x(&self) -> f64 {
        (self.width - 1) as f64
    }

    pub fn max_y(&self) -> f64 {
        (self.height - 1) as f64
    }

    /// Absolute affine map from pad cells to canvas units.
    pub fn pad_to_canvas(&self, p: Point) -> Result<Point, SketchError> {
        let max = (GRID - 1) as f64;
        if !(0.0..=max).contains(&p.x) || !(0.0..=max).contains(&p.y) {
            return Err(SketchError::OutOfRange(p.x, p.y));
        }
        Ok(Point::new(p.x / max * self.max_x(), p.y / max * self.max_y()))
    }

    pub fn canvas_to_pad(&self, c: Point) -> Point {
        let max = (GRID - 1) as f64;
        Point::new(c.x / self.max_x() * max, c.y / self.max_y() * max)
    }

    /// Reflection across the vertical midline.
    pub fn mirror_x(&self, c: Point) -> Point {
        Point::new(self.max_x() - c.x, c.y)
    }

    pub fn contains(&self, c: Point) -> bool {
        (0.0..=self.width as f64).contains(&c.x) && (0.0..=self.height as f64).contains(&c.y)
    }
}

/// Pad-to-canvas map on the default 1280×720 canvas.
pub fn pad_to_canvas(p: Point) -> Result<Point, SketchError> {
    Canvas::default().pad_to_canvas(p)
}

/// Colour as hue in degrees, saturation and value in [0, 1]; serialized `[h, s, v]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Hsv {
    pub h: f64,
    pub s: f64,
    pub v: f64,
}

impl From<[f64; 3]> for Hsv {
    fn from([h, s, v]: [f64; 3]) -> Self {
        Hsv { h, s, v }
    }
}

impl From<Hsv> for [f64; 3] {
    fn from(c: Hsv) -> Self {
        [c.h, c.s, c.v]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stroke {
    pub points: Vec<Point>,
    pub color: Hsv,
    pub thickness: f64,
}

/// Position of the colour-picker pin: hue index, saturation index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PickerPin {
    pub hue: u8,
    pub saturation: u8,
}

impl PickerPin {
    pub fn color(self) -> Hsv {
        Hsv {
            h: self.hue as f64 * 360.0 / PICKER_STEPS as f64,
            s: self.saturation as f64 / (PICKER_STEPS - 1) as f64,
            v: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Brush {
    pub color: Hsv,
    pub thickness: f64,
    pub mirror: bool,
    pub picker_pin: PickerPin,
}

impl Default for Brush {
    fn default() -> Self {
        let pin = PickerPin { hue: 0, saturation: 0 };
        Self { color: pin.color(), thickness: 4.0, mirror: false, picker_pin: pin }
    }
}

/// Step the picker pin: `dh` moves hue, `ds` moves saturation, each clamped
/// to the grid. The new colour only affects strokes started afterwards.
pub fn move_picker_pin(brush: &Brush, dh: i8, ds: i8) -> Brush {
    let step = |v: u8, d: i8| (v as i16 + d.signum() as i16).clamp(0, PICKER_STEPS as i16 - 1) as u8;
    let pin = PickerPin { hue: step(brush.picker_pin.hue, dh), saturation: step(brush.picker_pin.saturation, ds) };
    Brush { picker_pin: pin, color: pin.color(), ..*brush }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Draw,
    Move,
    Erase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Asset {
    pub id: u32,
    pub strokes: Vec<Stroke>,
    pub origin: Point,
    pub bindings: Vec<AnimationBinding>,
}

impl Asset {
    pub fn new(id: u32) -> Self {
        Self { id, strokes: vec![], origin: Point::ORIGIN, bindings: vec![] }
    }

    /// Mean of every stroke vertex (asset-local), used as the default
    /// rotation centre.
    pub fn vertex_mean(&self) -> Point {
        geom::mean(self.strokes.iter().flat_map(|s| s.points.iter().copied())).unwrap_or_default()
    }
}

/// Where strokes being drawn are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum StrokeTarget {
    #[default]
    Asset,
    /// An extra resource of a frame animation: binding index, resource index.
    FrameResource { binding: usize, frame: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrokeCommand {
    Begin(Point),
    Point(Point),
    End,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct OpenStroke {
    asset: usize,
    target: StrokeTarget,
    count: usize,
    created_asset: Option<(usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Inverse {
    PopStrokes { asset: usize, target: StrokeTarget, count: usize },
    RemoveAsset { index: usize, active: usize, next_id: u32 },
    InsertAsset { index: usize, asset: Asset, active: usize },
    RestoreAssets(Vec<(usize, Asset)>),
    SetOrigin { asset: usize, origin: Point },
    RestoreBrush(Brush),
    RestoreMode(Mode),
    RestoreBindings { asset: usize, bindings: Vec<AnimationBinding> },
    RestoreActive(usize),
    Batch(Vec<Inverse>),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
struct UndoLog {
    entries: VecDeque<Inverse>,
    group: Option<Vec<Inverse>>,
}

impl UndoLog {
    fn push(&mut self, inv: Inverse) {
        if let Some(g) = self.group.as_mut() {
            g.push(inv);
            return;
        }
        if self.entries.len() == UNDO_CAPACITY {
            self.entries.pop_front();
        }
        self.entries.push_back(inv);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SketchDocument {
    pub schema_version: u32,
    pub canvas: Canvas,
    pub assets: Vec<Asset>,
    pub active_asset: usize,
    pub brush: Brush,
    pub mode: Mode,
    pub menu: MenuState,
    pub eraser_radius: f64,
    pub stroke_target: StrokeTarget,
    next_asset_id: u32,
    open_stroke: Option<OpenStroke>,
    undo_log: UndoLog,
}

impl Default for SketchDocument {
    fn default() -> Self {
        Self::new()
    }
}

impl SketchDocument {
    pub fn new() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            canvas: Canvas::default(),
            assets: vec![],
            active_asset: 0,
            brush: Brush::default(),
            mode: Mode::Draw,
            menu: MenuState::hidden(),
            eraser_radius: DEFAULT_ERASER_RADIUS,
            stroke_target: StrokeTarget::Asset,
            next_asset_id: 1,
            open_stroke: None,
            undo_log: UndoLog::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SketchError> {
        let doc: SketchDocument = serde_json::from_str(s).map_err(|e| SketchError::Json(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(SketchError::SchemaVersion(doc.schema_version));
        }
        Ok(doc)
    }

    pub fn active(&self) -> Option<&Asset> {
        self.assets.get(self.active_asset)
    }

    pub fn undo_depth(&self) -> usize {
        self.undo_log.entries.len()
    }

    pub fn is_stroke_open(&self) -> bool {
        self.open_stroke.is_some()
    }

    /// Strokes with their asset's origin applied, in canvas units.
    pub fn canvas_strokes(&self) -> impl Iterator<Item = (u32, Stroke)> + '_ {
        self.assets.iter().flat_map(|a| {
            a.strokes.iter().map(move |s| {
                (a.id, Stroke { points: s.points.iter().map(|&p| p + a.origin).collect(), ..s.clone() })
            })
        })
    }

    fn require_mode(&self, needed: Mode) -> Result<(), SketchError> {
        if self.mode == needed {
            Ok(())
        } else {
            Err(SketchError::WrongMode { needed, current: self.mode })
        }
    }

    pub fn begin_group(&mut self) {
        if self.undo_log.group.is_none() {
            self.undo_log.group = Some(vec![]);
        }
    }

    /// Close the open group as a single undo step; empty groups leave no entry.
    pub fn end_group(&mut self) {
        if let Some(g) = self.undo_log.group.take() {
            if !g.is_empty() {
                self.undo_log.push(Inverse::Batch(g));
            }
        }
    }

    fn stroke_list(&mut self, asset: usize, target: StrokeTarget) -> Option<&mut Vec<Stroke>> {
        let a = self.assets.get_mut(asset)?;
        match target {
            StrokeTarget::Asset => Some(&mut a.strokes),
            StrokeTarget::FrameResource { binding, frame } => match a.bindings.get_mut(binding) {
                Some(AnimationBinding::Frame { frames, .. }) => frames.get_mut(frame),
                _ => None,
            },
        }
    }

    fn insert_asset(&mut self) -> usize {
        let id = self.next_asset_id;
        self.next_asset_id += 1;
        self.assets.push(Asset::new(id));
        self.assets.len() - 1
    }

    /// Draw with the current brush. Positions are pad coordinates.
    pub fn apply_stroke_command(&mut self, cmd: StrokeCommand) -> Result<(), SketchError> {
        match cmd {
            StrokeCommand::Begin(p) => {
                self.require_mode(Mode::Draw)?;
                let c = self.canvas.pad_to_canvas(p)?;
                if self.open_stroke.is_some() {
                    self.apply_stroke_command(StrokeCommand::End)?;
                }
                let mut created_asset = None;
                if self.assets.is_empty() {
                    created_asset = Some((self.active_asset, self.next_asset_id));
                    self.active_asset = self.insert_asset();
                }
                let asset = self.active_asset;
                let mut target = self.stroke_target;
                if self.stroke_list(asset, target).is_none() {
                    target = StrokeTarget::Asset;
                }
                let origin = self.assets[asset].origin;
                let brush = self.brush;
                let mut new = vec![Stroke { points: vec![c - origin], color: brush.color, thickness: brush.thickness }];
                if brush.mirror {
                    new.push(Stroke {
                        points: vec![self.canvas.mirror_x(c) - origin],
                        color: brush.color,
                        thickness: brush.thickness,
                    });
                }
                let count = new.len();
                self.stroke_list(asset, target).expect("target checked").extend(new);
                self.open_stroke = Some(OpenStroke { asset, target, count, created_asset });
                Ok(())
            }
            StrokeCommand::Point(p) => {
                let open = self.open_stroke.clone().ok_or(SketchError::PointWithoutBegin)?;
                let c = self.canvas.pad_to_canvas(p)?;
                let origin = self.assets[open.asset].origin;
                let twin = self.canvas.mirror_x(c) - origin;
                let list = self.stroke_list(open.asset, open.target).ok_or(SketchError::PointWithoutBegin)?;
                let n = list.len();
                list[n - open.count].points.push(c - origin);
                if open.count == 2 {
                    list[n - 1].points.push(twin);
                }
                Ok(())
            }
            StrokeCommand::End => {
                let open = self.open_stroke.take().ok_or(SketchError::PointWithoutBegin)?;
                let inv = match open.created_asset {
                    Some((active, next_id)) => Inverse::RemoveAsset { index: open.asset, active, next_id },
                    None => Inverse::PopStrokes { asset: open.asset, target: open.target, count: open.count },
                };
                self.undo_log.push(inv);
                Ok(())
            }
        }
    }

    /// Remove every stroke point within `radius` of `cursor` (canvas units),
    /// splitting strokes around removed runs.
    pub fn erase_at(&mut self, cursor: Point, radius: f64) -> Result<(), SketchError> {
        self.require_mode(Mode::Erase)?;
        let mut changed = vec![];
        for (i, asset) in self.assets.iter_mut().enumerate() {
            let before = asset.clone();
            let origin = asset.origin;
            let mut kept = Vec::with_capacity(asset.strokes.len());
            let mut touched = false;
            for s in asset.strokes.drain(..) {
                if !s.points.iter().any(|&p| (p + origin).dist(cursor) <= radius) {
                    kept.push(s);
                    continue;
                }
                touched = true;
                let mut run = vec![];
                for &p in &s.points {
                    if (p + origin).dist(cursor) <= radius {
                        if !run.is_empty() {
                            kept.push(Stroke { points: std::mem::take(&mut run), ..s.clone() });
                        }
                    } else {
                        run.push(p);
                    }
                }
                if !run.is_empty() {
                    kept.push(Stroke { points: run, ..s });
                }
            }
            asset.strokes = kept;
            if touched {
                changed.push((i, before));
            }
        }
        self.undo_log.push(Inverse::RestoreAssets(changed));
        Ok(())
    }

    /// Translate the active asset.
    pub fn move_asset(&mut self, delta: Point) -> Result<(), SketchError> {
        self.require_mode(Mode::Move)?;
        let i = self.active_asset;
        let asset = self.assets.get_mut(i).ok_or(SketchError::NoAsset)?;
        let origin = asset.origin;
        asset.origin = origin + delta;
        self.undo_log.push(Inverse::SetOrigin { asset: i, origin });
        Ok(())
    }

    /// Append an empty asset and make it active.
    pub fn create_asset(&mut self) -> u32 {
        let active = self.active_asset;
        let next_id = self.next_asset_id;
        let index = self.insert_asset();
        self.active_asset = index;
        self.undo_log.push(Inverse::RemoveAsset { index, active, next_id });
        self.assets[index].id
    }

    pub fn delete_asset(&mut self) -> Result<(), SketchError> {
        let index = self.active_asset;
        if index >= self.assets.len() {
            return Err(SketchError::NoAsset);
        }
        let asset = self.assets.remove(index);
        self.active_asset = index.min(self.assets.len().saturating_sub(1));
        self.undo_log.push(Inverse::InsertAsset { index, asset, active: index });
        Ok(())
    }

    pub fn select_asset(&mut self, index: usize) -> Result<(), SketchError> {
        if index >= self.assets.len() {
            return Err(SketchError::NoAsset);
        }
        let prev = self.active_asset;
        self.active_asset = index;
        self.undo_log.push(Inverse::RestoreActive(prev));
        Ok(())
    }

    pub fn set_mode(&mut self, mode: Mode) {
        let prev = self.mode;
        self.mode = mode;
        self.undo_log.push(Inverse::RestoreMode(prev));
    }

    pub fn set_brush(&mut self, brush: Brush) {
        let prev = self.brush;
        self.brush = Brush { thickness: brush.thickness.clamp(MIN_THICKNESS, MAX_THICKNESS), ..brush };
        self.undo_log.push(Inverse::RestoreBrush(prev));
    }

    /// Bind an animation to the active asset, creating one if the document is empty.
    pub fn bind_animation(&mut self, binding: AnimationBinding) -> Result<(), SketchError> {
        binding.validate()?;
        let i = self.active_asset;
        let asset = self.assets.get_mut(i).ok_or(SketchError::NoAsset)?;
        let prev = asset.bindings.clone();
        asset.bindings.push(binding);
        self.undo_log.push(Inverse::RestoreBindings { asset: i, bindings: prev });
        Ok(())
    }

    /// Replace binding `index` of the active asset.
    pub fn update_binding(&mut self, index: usize, binding: AnimationBinding) -> Result<(), SketchError> {
        binding.validate()?;
        let i = self.active_asset;
        let asset = self.assets.get_mut(i).ok_or(SketchError::NoAsset)?;
        if index >= asset.bindings.len() {
            return Err(SketchError::NoBinding(index));
        }
        let prev = asset.bindings.clone();
        asset.bindings[index] = binding;
        self.undo_log.push(Inverse::RestoreBindings { asset: i, bindings: prev });
        Ok(())
    }

    /// Revert the latest mutation. Returns `false` when there is nothing to undo.
    pub fn undo(&mut self) -> bool {
        if self.open_stroke.is_some() {
            let _ = self.apply_stroke_command(StrokeCommand::End);
        }
        self.end_group();
        match self.undo_log.entries.pop_back() {
            Some(inv) => {
                self.apply_inverse(inv);
                true
            }
            None => false,
        }
    }

    fn apply_inverse(&mut self, inv: Inverse) {
        match inv {
            Inverse::PopStrokes { asset, target, count } => {
                if let Some(list) = self.stroke_list(asset, target) {
                    let n = list.len().saturating_sub(count);
                    list.truncate(n);
                }
            }
            Inverse::RemoveAsset { index, active, next_id } => {
                if index < self.assets.len() {
                    self.assets.remove(index);
                }
                self.active_asset = active;
                self.next_asset_id = next_id;
            }
            Inverse::InsertAsset { index, asset, active } => {
                self.assets.insert(index.min(self.assets.len()), asset);
                self.active_asset = active;
            }
            Inverse::RestoreAssets(list) => {
                for (i, a) in list {
                    if let Some(slot) = self.assets.get_mut(i) {
                        *slot = a;
                    }
                }
            }
            Inverse::SetOrigin { asset, origin } => {
                if let Some(a) = self.assets.get_mut(asset) {
                    a.origin = origin;
                }
            }
            Inverse::RestoreBrush(b) => self.brush = b,
            Inverse::RestoreMode(m) => self.mode = m,
            Inverse::RestoreBindings { asset, bindings } => {
                if let Some(a) = self.assets.get_mut(asset) {
                    a.bindings = bindings;
                }
            }
            Inverse::RestoreActive(i) => self.active_asset = i,
            Inverse::Batch(list) => {
                for inv in list.into_iter().rev() {
                    self.apply_inverse(inv);
                }
            }
        }
    }
}

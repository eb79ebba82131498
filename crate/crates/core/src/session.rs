//! A full interactive session: frames in, gestures, commands, menu updates
//! and document changes out.
//!
//! [`Pipeline`] is the recognition half on its own (preprocess, blobs, vote,
//! gesture state machine). [`Session`] adds the command layer, the menu and
//! the sketch document, and is what `recognize`, `replay` and `serve` run.

use serde::{Deserialize, Serialize};

use crate::anim::{adjust_property, properties_of, scene_at, Adjust, AnimationBinding, EmitParams, Property, SceneFrame};
use crate::command::{
    map_gesture, menu_step, Axis, Command, Context, MenuAction, MenuCatalog, MenuLevel, MenuState, ANIMATION_MENU,
    DRAW_MENU, MAIN_MENU,
};
use crate::framestream::{preprocess, FrameError, PreprocessConfig, PressureFrame};
use crate::geom::Point;
use crate::gesture::{GestureConfig, GestureEvent, GestureRecognizer, Millis};
use crate::sketch::{move_picker_pin, Brush, Canvas, Mode, SketchDocument, StrokeCommand, StrokeTarget};
use crate::touchdetect::{TouchTracker, DEFAULT_VOTE_N};

pub const ADD_FRAME: &str = "Add Frame";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionConfig {
    pub preprocess: PreprocessConfig,
    pub gesture: GestureConfig,
    pub vote_n: usize,
    pub canvas: Canvas,
    pub seed: u64,
    pub eraser_radius: f64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            preprocess: PreprocessConfig::default(),
            gesture: GestureConfig::default(),
            vote_n: DEFAULT_VOTE_N,
            canvas: Canvas::default(),
            seed: 0,
            eraser_radius: crate::sketch::DEFAULT_ERASER_RADIUS,
        }
    }
}

impl SessionConfig {
    /// Reject settings the pipeline cannot run with.
    pub fn validate(&self) -> Result<(), String> {
        let g = &self.gesture;
        if self.preprocess.median_window.is_multiple_of(2) {
            return Err(format!("median_window must be odd, got {}", self.preprocess.median_window));
        }
        if self.vote_n == 0 {
            return Err("vote_n must be positive".into());
        }
        if g.tap_ms == 0 || g.double_window_ms == 0 || g.longpress_ms == 0 || g.hold_cycle_ms == 0 {
            return Err("gesture thresholds must be positive".into());
        }
        if g.drag_cells.is_nan() || g.drag_cells <= 0.0 {
            return Err("drag_cells must be positive".into());
        }
        if self.canvas.width < 2 || self.canvas.height < 2 {
            return Err("canvas too small".into());
        }
        Ok(())
    }
}

/// Frames to gesture events.
#[derive(Debug, Clone)]
pub struct Pipeline {
    preprocess: PreprocessConfig,
    tracker: TouchTracker,
    recognizer: GestureRecognizer,
    last_t: Millis,
}

impl Pipeline {
    pub fn new(cfg: &SessionConfig) -> Self {
        Self {
            preprocess: cfg.preprocess,
            tracker: TouchTracker::new(cfg.vote_n.max(1)),
            recognizer: GestureRecognizer::new(cfg.gesture),
            last_t: 0,
        }
    }

    pub fn push(&mut self, frame: &PressureFrame) -> Result<Vec<GestureEvent>, FrameError> {
        let clean = preprocess(frame, &self.preprocess)?;
        let now = (frame.timestamp_ms as Millis).max(self.last_t);
        self.last_t = now;
        Ok(match self.tracker.push(&clean) {
            Some(obs) => self.recognizer.step(&obs, now),
            None => vec![],
        })
    }

    /// Close any open gesture at the last seen timestamp.
    pub fn finish(&mut self) -> Vec<GestureEvent> {
        self.tracker.reset();
        self.recognizer.finish(self.last_t)
    }

    pub fn last_t(&self) -> Millis {
        self.last_t
    }
}

/// Run every frame through a fresh pipeline and return all events.
pub fn recognize_frames(frames: &[PressureFrame], cfg: &SessionConfig) -> Result<Vec<GestureEvent>, FrameError> {
    let mut p = Pipeline::new(cfg);
    let mut out = vec![];
    for f in frames {
        out.extend(p.push(f)?);
    }
    out.extend(p.finish());
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tool {
    Draw,
    Move,
    Erase,
    Animation,
}

/// What property ±1 commands currently adjust.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Focus {
    Thickness,
    Color,
    Binding { index: usize, property: Property },
}

/// A multi-step definition waiting for Confirm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Pending {
    FrameResource,
    Emit { segment: Option<[Point; 2]>, trajectory: Option<[Point; 2]> },
    MovePath { trajectory: Vec<Point> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandMsg {
    pub t: Millis,
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MenuMsg {
    pub t: Millis,
    pub menu: MenuState,
    pub actions: Vec<MenuAction>,
    pub tool: Tool,
    pub mode: Mode,
    pub focus: Option<Focus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticMsg {
    pub t: Millis,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentMsg {
    pub document: SketchDocument,
}

/// Server-to-client messages of the session protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ServerMessage {
    Gesture(GestureEvent),
    Command(CommandMsg),
    Menu(MenuMsg),
    Scene(SceneFrame),
    Diagnostic(DiagnosticMsg),
    Document(DocumentMsg),
}

impl ServerMessage {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("message serializes")
    }
}

/// Client-to-server messages. Frames carry only their nonzero cells as `[x, y, p]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ClientMessage {
    Frame { seq: u16, t: u32, cells: Vec<[u32; 3]> },
    Config(SessionConfig),
    Document,
}

impl ClientMessage {
    pub fn from_frame(frame: &PressureFrame) -> Self {
        ClientMessage::Frame {
            seq: frame.seq,
            t: frame.timestamp_ms,
            cells: frame.nonzero().map(|(x, y, p)| [x as u32, y as u32, p as u32]).collect(),
        }
    }
}

/// Rebuild a dense frame from a sparse frame message.
pub fn frame_from_cells(seq: u16, t: u32, cells: &[[u32; 3]]) -> Result<PressureFrame, String> {
    let mut f = PressureFrame::zeroed(seq, t);
    let g = crate::framestream::GRID as u32;
    for &[x, y, p] in cells {
        if x >= g || y >= g || p > 255 {
            return Err(format!("cell [{x}, {y}, {p}] out of range"));
        }
        f.set(x as usize, y as usize, p as u8);
    }
    Ok(f)
}

#[derive(Debug, Clone)]
pub struct Session {
    cfg: SessionConfig,
    pipeline: Pipeline,
    pub doc: SketchDocument,
    tool: Tool,
    focus: Option<Focus>,
    pending: Option<Pending>,
    capture: Option<Vec<Point>>,
    drag_last: Option<Point>,
    last_t: Option<Millis>,
}

impl Session {
    pub fn new(cfg: SessionConfig) -> Self {
        let mut doc = SketchDocument::new();
        doc.canvas = cfg.canvas;
        doc.eraser_radius = cfg.eraser_radius;
        Self {
            pipeline: Pipeline::new(&cfg),
            cfg,
            doc,
            tool: Tool::Draw,
            focus: None,
            pending: None,
            capture: None,
            drag_last: None,
            last_t: None,
        }
    }

    pub fn config(&self) -> &SessionConfig {
        &self.cfg
    }

    /// Swap in new thresholds; the recognition pipeline restarts, the document stays.
    pub fn reconfigure(&mut self, cfg: SessionConfig) {
        self.pipeline = Pipeline::new(&cfg);
        self.doc.eraser_radius = cfg.eraser_radius;
        self.cfg = cfg;
    }

    pub fn tool(&self) -> Tool {
        self.tool
    }

    pub fn focus(&self) -> Option<Focus> {
        self.focus
    }

    pub fn pending(&self) -> Option<&Pending> {
        self.pending.as_ref()
    }

    pub fn push_frame(&mut self, frame: &PressureFrame) -> Result<Vec<ServerMessage>, FrameError> {
        let events = self.pipeline.push(frame)?;
        let now = self.pipeline.last_t();
        Ok(self.dispatch(events, now))
    }

    /// Flush gestures still open at the end of a stream.
    pub fn finish(&mut self) -> Vec<ServerMessage> {
        let events = self.pipeline.finish();
        let now = self.pipeline.last_t();
        self.dispatch(events, now)
    }

    pub fn scene(&self, t_ms: Millis) -> SceneFrame {
        scene_at(&self.doc, t_ms, self.cfg.seed)
    }

    pub fn handle(&mut self, msg: ClientMessage) -> Result<Vec<ServerMessage>, String> {
        match msg {
            ClientMessage::Frame { seq, t, cells } => {
                let frame = frame_from_cells(seq, t, &cells)?;
                let mut out = self.push_frame(&frame).map_err(|e| e.to_string())?;
                out.push(ServerMessage::Scene(self.scene(t as Millis)));
                Ok(out)
            }
            ClientMessage::Config(cfg) => {
                cfg.validate()?;
                self.reconfigure(cfg);
                Ok(vec![])
            }
            ClientMessage::Document => Ok(vec![ServerMessage::Document(DocumentMsg { document: self.doc.clone() })]),
        }
    }

    fn context(&self) -> Context {
        Context { menu_open: self.doc.menu.is_open(), property_focus: self.focus.is_some(), mode: self.doc.mode }
    }

    fn dispatch(&mut self, events: Vec<GestureEvent>, now: Millis) -> Vec<ServerMessage> {
        let dt = self.last_t.map_or(0, |t| now.saturating_sub(t));
        self.last_t = Some(now);
        let mut out = vec![];
        if events.is_empty() {
            let (menu, _) = menu_step(&self.doc.menu, None, dt, &MenuCatalog::default());
            self.doc.menu = menu;
        }
        for (i, ev) in events.into_iter().enumerate() {
            let cmd = map_gesture(&ev, &self.context());
            out.push(ServerMessage::Gesture(ev));
            let dt = if i == 0 { dt } else { 0 };
            match cmd {
                Some(cmd) => {
                    out.push(ServerMessage::Command(CommandMsg { t: now, command: cmd }));
                    self.apply(cmd, dt, now, &mut out);
                }
                None => {
                    let (menu, _) = menu_step(&self.doc.menu, None, dt, &MenuCatalog::default());
                    self.doc.menu = menu;
                }
            }
        }
        out
    }

    fn catalog(&self) -> MenuCatalog {
        let owned = |items: &[&str]| items.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let secondary = match self.tool {
            Tool::Draw => owned(&DRAW_MENU),
            Tool::Animation => owned(&ANIMATION_MENU),
            Tool::Move | Tool::Erase => vec![],
        };
        let mut tertiary = vec![];
        if let Some(b) = self.doc.active().and_then(|a| a.bindings.last()) {
            tertiary = properties_of(b.kind()).iter().map(|p| p.label().to_string()).collect();
            if matches!(b, AnimationBinding::Frame { .. }) {
                tertiary.push(ADD_FRAME.to_string());
            }
        }
        MenuCatalog { main: owned(&MAIN_MENU), secondary, tertiary }
    }

    fn apply(&mut self, cmd: Command, dt: Millis, now: Millis, out: &mut Vec<ServerMessage>) {
        let diag = |out: &mut Vec<ServerMessage>, message: String| {
            out.push(ServerMessage::Diagnostic(DiagnosticMsg { t: now, message }))
        };
        match cmd {
            Command::ActivateMainMenu
            | Command::ActivateSecondaryMenu
            | Command::ActivateTertiaryMenu
            | Command::SwitchMenuItem
            | Command::ReleaseMenu => {
                let (menu, actions) = menu_step(&self.doc.menu, Some(&cmd), dt, &self.catalog());
                self.doc.menu = menu;
                let mut extra = vec![];
                for a in &actions {
                    if let MenuAction::InvokeItem { level, label, .. } = a {
                        if let Err(e) = self.invoke(*level, label) {
                            extra.push(e);
                        }
                    }
                }
                out.push(ServerMessage::Menu(MenuMsg {
                    t: now,
                    menu: self.doc.menu.clone(),
                    actions,
                    tool: self.tool,
                    mode: self.doc.mode,
                    focus: self.focus,
                }));
                for e in extra {
                    diag(out, e);
                }
            }
            Command::Confirm => {
                if let Err(e) = self.confirm() {
                    diag(out, e);
                }
            }
            Command::Undo => {
                if !self.doc.undo() {
                    diag(out, "nothing to undo".into());
                }
            }
            Command::ToggleMoveDraw => {
                let (mode, tool) = if self.doc.mode == Mode::Move { (Mode::Draw, Tool::Draw) } else { (Mode::Move, Tool::Move) };
                self.doc.set_mode(mode);
                self.tool = tool;
            }
            Command::PropertyDec { axis } | Command::PropertyDecRepeat { axis } => {
                if let Err(e) = self.step_property(axis, Adjust::Dec) {
                    diag(out, e);
                }
            }
            Command::PropertyInc { axis } | Command::PropertyIncRepeat { axis } => {
                if let Err(e) = self.step_property(axis, Adjust::Inc) {
                    diag(out, e);
                }
            }
            Command::StrokeBegin { at } | Command::StrokePoint { at } => {
                let begin = matches!(cmd, Command::StrokeBegin { .. });
                if let Err(e) = self.stroke_point(at, begin) {
                    diag(out, e);
                }
            }
            Command::StrokeEnd => {
                if let Err(e) = self.stroke_end() {
                    diag(out, e);
                }
            }
            Command::MoveBegin { at } | Command::MoveTo { at } => {
                let r = self.cfg.canvas.pad_to_canvas(at).map_err(|e| e.to_string()).and_then(|c| {
                    if matches!(cmd, Command::MoveBegin { .. }) {
                        self.doc.begin_group();
                        self.drag_last = Some(c);
                        return Ok(());
                    }
                    let last = self.drag_last.unwrap_or(c);
                    self.drag_last = Some(c);
                    self.doc.move_asset(c - last).map_err(|e| e.to_string())
                });
                if let Err(e) = r {
                    diag(out, e);
                }
            }
            Command::EraseBegin { at } | Command::ErasePoint { at } => {
                if matches!(cmd, Command::EraseBegin { .. }) {
                    self.doc.begin_group();
                }
                let radius = self.doc.eraser_radius;
                let r = self
                    .cfg
                    .canvas
                    .pad_to_canvas(at)
                    .map_err(|e| e.to_string())
                    .and_then(|c| self.doc.erase_at(c, radius).map_err(|e| e.to_string()));
                if let Err(e) = r {
                    diag(out, e);
                }
            }
            Command::MoveEnd | Command::EraseEnd => {
                self.drag_last = None;
                self.doc.end_group();
            }
        }
    }

    fn set_mode_if_needed(&mut self, mode: Mode) {
        if self.doc.mode != mode {
            self.doc.set_mode(mode);
        }
    }

    fn invoke(&mut self, level: MenuLevel, label: &str) -> Result<(), String> {
        let err = |e: crate::sketch::SketchError| e.to_string();
        match (level, label) {
            (MenuLevel::Main, "Move") => {
                self.tool = Tool::Move;
                self.set_mode_if_needed(Mode::Move);
            }
            (MenuLevel::Main, "Draw") => {
                self.tool = Tool::Draw;
                self.set_mode_if_needed(Mode::Draw);
            }
            (MenuLevel::Main, "Erase") => {
                self.tool = Tool::Erase;
                self.set_mode_if_needed(Mode::Erase);
            }
            (MenuLevel::Main, "Create a New Asset") => {
                self.doc.create_asset();
            }
            (MenuLevel::Main, "Animation") => {
                self.tool = Tool::Animation;
                self.set_mode_if_needed(Mode::Draw);
            }
            (MenuLevel::Main, "Delete") => self.doc.delete_asset().map_err(err)?,
            (MenuLevel::Secondary, "Change Thickness") => self.focus = Some(Focus::Thickness),
            (MenuLevel::Secondary, "Change Color") => self.focus = Some(Focus::Color),
            (MenuLevel::Secondary, "Mirror Brush") => {
                let b = self.doc.brush;
                self.doc.set_brush(Brush { mirror: !b.mirror, ..b });
            }
            (MenuLevel::Secondary, "Doodle") => self.doc.bind_animation(AnimationBinding::doodle()).map_err(err)?,
            (MenuLevel::Secondary, "Rotate") => self
                .doc
                .bind_animation(AnimationBinding::Rotate { angle_deg: 360.0, period_s: 4.0, center: None })
                .map_err(err)?,
            (MenuLevel::Secondary, "Frame") => {
                self.doc.bind_animation(AnimationBinding::Frame { frames: vec![vec![]], frame_rate: 2.0 }).map_err(err)?;
                let binding = self.doc.active().map_or(0, |a| a.bindings.len() - 1);
                self.doc.stroke_target = StrokeTarget::FrameResource { binding, frame: 0 };
                self.pending = Some(Pending::FrameResource);
            }
            (MenuLevel::Secondary, "Emit") => {
                self.doc.active().ok_or("no asset to emit")?;
                self.pending = Some(Pending::Emit { segment: None, trajectory: None });
            }
            (MenuLevel::Secondary, "Move") => {
                self.doc.active().ok_or("no asset to move")?;
                self.pending = Some(Pending::MovePath { trajectory: vec![] });
            }
            (MenuLevel::Tertiary, ADD_FRAME) => {
                let asset = self.doc.active().ok_or("no asset")?;
                let index = asset.bindings.len().checked_sub(1).ok_or("no binding")?;
                let AnimationBinding::Frame { frames, frame_rate } = &asset.bindings[index] else {
                    return Err("active binding is not a frame animation".into());
                };
                let mut frames = frames.clone();
                frames.push(vec![]);
                let frame = frames.len() - 1;
                let updated = AnimationBinding::Frame { frames, frame_rate: *frame_rate };
                self.doc.update_binding(index, updated).map_err(err)?;
                self.doc.stroke_target = StrokeTarget::FrameResource { binding: index, frame };
                self.pending = Some(Pending::FrameResource);
            }
            (MenuLevel::Tertiary, label) => {
                let asset = self.doc.active().ok_or("no asset")?;
                let index = asset.bindings.len().checked_sub(1).ok_or("no binding")?;
                let property = properties_of(asset.bindings[index].kind())
                    .iter()
                    .copied()
                    .find(|p| p.label() == label)
                    .ok_or_else(|| format!("unknown property {label:?}"))?;
                self.focus = Some(Focus::Binding { index, property });
            }
            (level, label) => return Err(format!("no action for {label:?} in {level:?} menu")),
        }
        Ok(())
    }

    fn confirm(&mut self) -> Result<(), String> {
        match self.pending.take() {
            Some(Pending::FrameResource) => {
                self.doc.stroke_target = StrokeTarget::Asset;
                Ok(())
            }
            Some(Pending::Emit { segment: Some(segment), trajectory: Some(trajectory) }) => {
                self.doc.bind_animation(AnimationBinding::Emit(EmitParams::new(segment, trajectory))).map_err(|e| e.to_string())
            }
            Some(Pending::Emit { .. }) => Err("emit needs an ejection segment and a trajectory; definition dropped".into()),
            Some(Pending::MovePath { trajectory }) => self
                .doc
                .bind_animation(AnimationBinding::Move { trajectory, duration_s: 4.0 })
                .map_err(|e| format!("{e}; definition dropped")),
            None if self.focus.is_some() => {
                self.focus = None;
                Ok(())
            }
            None => Err("nothing to confirm".into()),
        }
    }

    fn step_property(&mut self, axis: Axis, dir: Adjust) -> Result<(), String> {
        let sign = if dir == Adjust::Inc { 1 } else { -1 };
        match self.focus.ok_or("no property in focus")? {
            Focus::Thickness => {
                let b = self.doc.brush;
                self.doc.set_brush(Brush { thickness: b.thickness + sign as f64, ..b });
            }
            Focus::Color => {
                let (dh, ds) = match axis {
                    Axis::Horizontal => (sign, 0),
                    Axis::Vertical => (0, sign),
                };
                let b = move_picker_pin(&self.doc.brush, dh, ds);
                self.doc.set_brush(b);
            }
            Focus::Binding { index, property } => {
                let binding = self
                    .doc
                    .active()
                    .and_then(|a| a.bindings.get(index))
                    .ok_or("focused binding no longer exists")?;
                let updated = adjust_property(binding, property, dir);
                self.doc.update_binding(index, updated).map_err(|e| e.to_string())?;
            }
        }
        Ok(())
    }

    fn capturing(&self) -> bool {
        matches!(self.pending, Some(Pending::Emit { .. } | Pending::MovePath { .. }))
    }

    fn stroke_point(&mut self, at: Point, begin: bool) -> Result<(), String> {
        if self.capturing() {
            let c = self.cfg.canvas.pad_to_canvas(at).map_err(|e| e.to_string())?;
            if begin {
                self.capture = Some(vec![c]);
            } else if let Some(cap) = self.capture.as_mut() {
                cap.push(c);
            }
            return Ok(());
        }
        let cmd = if begin { StrokeCommand::Begin(at) } else { StrokeCommand::Point(at) };
        self.doc.apply_stroke_command(cmd).map_err(|e| e.to_string())
    }

    fn stroke_end(&mut self) -> Result<(), String> {
        if let Some(cap) = self.capture.take() {
            let ends = [cap[0], *cap.last().expect("capture starts with a point")];
            match self.pending.as_mut() {
                Some(Pending::Emit { segment, trajectory }) => {
                    if segment.is_none() {
                        *segment = Some(ends);
                    } else {
                        *trajectory = Some(ends);
                    }
                }
                Some(Pending::MovePath { trajectory }) => *trajectory = cap,
                _ => {}
            }
            return Ok(());
        }
        self.doc.apply_stroke_command(StrokeCommand::End).map_err(|e| e.to_string())
    }
}

/// Run a whole stream through a fresh session; returns the session and every message.
pub fn run_session(frames: &[PressureFrame], cfg: &SessionConfig) -> Result<(Session, Vec<ServerMessage>), FrameError> {
    let mut s = Session::new(cfg.clone());
    let mut out = vec![];
    for f in frames {
        out.extend(s.push_frame(f)?);
    }
    out.extend(s.finish());
    Ok((s, out))
}

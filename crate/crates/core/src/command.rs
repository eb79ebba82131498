//! Gesture-to-command mapping and the menu state machine.
//!
//! [`map_gesture`] is a fixed table keyed by (gesture kind, finger count,
//! zone) with two pieces of context: whether a menu is open and whether a
//! property is being edited. [`menu_step`] opens, advances and releases menus;
//! what an invoked item does is up to the caller.

use serde::{Deserialize, Serialize};

use crate::gesture::{GestureEvent, GestureKind, Millis, Zone};
use crate::geom::Point;
use crate::sketch::Mode;

/// Which pad axis a property step came from. The colour picker uses it to
/// choose between hue and saturation; scalar properties ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command")]
pub enum Command {
    ActivateMainMenu,
    ActivateSecondaryMenu,
    ActivateTertiaryMenu,
    SwitchMenuItem,
    ReleaseMenu,
    Confirm,
    Undo,
    ToggleMoveDraw,
    PropertyDec { axis: Axis },
    PropertyInc { axis: Axis },
    PropertyDecRepeat { axis: Axis },
    PropertyIncRepeat { axis: Axis },
    StrokeBegin { at: Point },
    StrokePoint { at: Point },
    StrokeEnd,
    MoveBegin { at: Point },
    MoveTo { at: Point },
    MoveEnd,
    EraseBegin { at: Point },
    ErasePoint { at: Point },
    EraseEnd,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ActivateMainMenu => "ActivateMainMenu",
            Command::ActivateSecondaryMenu => "ActivateSecondaryMenu",
            Command::ActivateTertiaryMenu => "ActivateTertiaryMenu",
            Command::SwitchMenuItem => "SwitchMenuItem",
            Command::ReleaseMenu => "ReleaseMenu",
            Command::Confirm => "Confirm",
            Command::Undo => "Undo",
            Command::ToggleMoveDraw => "ToggleMoveDraw",
            Command::PropertyDec { .. } => "PropertyDec",
            Command::PropertyInc { .. } => "PropertyInc",
            Command::PropertyDecRepeat { .. } => "PropertyDecRepeat",
            Command::PropertyIncRepeat { .. } => "PropertyIncRepeat",
            Command::StrokeBegin { .. } => "StrokeBegin",
            Command::StrokePoint { .. } => "StrokePoint",
            Command::StrokeEnd => "StrokeEnd",
            Command::MoveBegin { .. } => "MoveBegin",
            Command::MoveTo { .. } => "MoveTo",
            Command::MoveEnd => "MoveEnd",
            Command::EraseBegin { .. } => "EraseBegin",
            Command::ErasePoint { .. } => "ErasePoint",
            Command::EraseEnd => "EraseEnd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    pub menu_open: bool,
    pub property_focus: bool,
    pub mode: Mode,
}

impl Default for Context {
    fn default() -> Self {
        Self { menu_open: false, property_focus: false, mode: Mode::Draw }
    }
}

fn property_step(zone: Zone, repeat: bool) -> Option<Command> {
    let (inc, axis) = match zone {
        Zone::Left => (false, Axis::Horizontal),
        Zone::Right => (true, Axis::Horizontal),
        Zone::Top => (true, Axis::Vertical),
        Zone::Bottom => (false, Axis::Vertical),
        Zone::Any => return None,
    };
    Some(match (inc, repeat) {
        (false, false) => Command::PropertyDec { axis },
        (true, false) => Command::PropertyInc { axis },
        (false, true) => Command::PropertyDecRepeat { axis },
        (true, true) => Command::PropertyIncRepeat { axis },
    })
}

fn drag_command(kind: GestureKind, mode: Mode, at: Point) -> Option<Command> {
    use GestureKind::*;
    Some(match (mode, kind) {
        (Mode::Draw, DragStart) => Command::StrokeBegin { at },
        (Mode::Draw, DragMove) => Command::StrokePoint { at },
        (Mode::Draw, DragEnd) => Command::StrokeEnd,
        (Mode::Move, DragStart) => Command::MoveBegin { at },
        (Mode::Move, DragMove) => Command::MoveTo { at },
        (Mode::Move, DragEnd) => Command::MoveEnd,
        (Mode::Erase, DragStart) => Command::EraseBegin { at },
        (Mode::Erase, DragMove) => Command::ErasePoint { at },
        (Mode::Erase, DragEnd) => Command::EraseEnd,
        _ => return None,
    })
}

/// Look up the command for a gesture event; unmapped combinations give `None`.
pub fn map_gesture(ev: &GestureEvent, ctx: &Context) -> Option<Command> {
    use GestureKind::*;
    if ctx.menu_open {
        return match ev.kind {
            LongPressHold => Some(Command::SwitchMenuItem),
            LongPressEnd => Some(Command::ReleaseMenu),
            _ => None,
        };
    }
    match (ev.kind, ev.fingers, ev.zone) {
        (DoubleTap, 1, _) => Some(Command::Confirm),
        (Tap, 2, _) => Some(Command::Undo),
        (LongPressStart, 2, Zone::Left) => Some(Command::ActivateSecondaryMenu),
        (LongPressStart, 2, Zone::Right) => Some(Command::ToggleMoveDraw),
        (Tap, 1, z) if ctx.property_focus => property_step(z, false),
        (LongPressStart | LongPressHold, 1, z) if ctx.property_focus => property_step(z, true),
        (LongPressStart, 1, Zone::Left) => Some(Command::ActivateMainMenu),
        (LongPressStart, 1, Zone::Right) => Some(Command::ActivateTertiaryMenu),
        (DragStart | DragMove | DragEnd, 1, _) => drag_command(ev.kind, ctx.mode, ev.fine_position),
        _ => None,
    }
}

pub const MAIN_MENU: [&str; 6] = ["Move", "Draw", "Erase", "Create a New Asset", "Animation", "Delete"];
pub const DRAW_MENU: [&str; 3] = ["Change Thickness", "Change Color", "Mirror Brush"];
pub const ANIMATION_MENU: [&str; 5] = ["Doodle", "Frame", "Emit", "Rotate", "Move"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MenuLevel {
    Hidden,
    Main,
    Secondary,
    Tertiary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MenuState {
    pub level: MenuLevel,
    pub items: Vec<String>,
    pub selected: usize,
    pub cycle_elapsed_ms: Millis,
}

impl MenuState {
    pub fn hidden() -> Self {
        Self { level: MenuLevel::Hidden, items: vec![], selected: 0, cycle_elapsed_ms: 0 }
    }

    pub fn is_open(&self) -> bool {
        self.level != MenuLevel::Hidden
    }

    pub fn selected_item(&self) -> Option<&str> {
        self.is_open().then(|| self.items[self.selected].as_str())
    }
}

impl Default for MenuState {
    fn default() -> Self {
        Self::hidden()
    }
}

/// Item lists for the three levels as they stand right now.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MenuCatalog {
    pub main: Vec<String>,
    pub secondary: Vec<String>,
    pub tertiary: Vec<String>,
}

impl MenuCatalog {
    fn items(&self, level: MenuLevel) -> &[String] {
        match level {
            MenuLevel::Hidden => &[],
            MenuLevel::Main => &self.main,
            MenuLevel::Secondary => &self.secondary,
            MenuLevel::Tertiary => &self.tertiary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action")]
pub enum MenuAction {
    Opened { level: MenuLevel },
    Selected { index: usize },
    InvokeItem { level: MenuLevel, index: usize, label: String },
    Closed,
    Diagnostic { message: String },
}

/// Advance the menu by `dt` ms and apply `cmd` if it concerns menus.
pub fn menu_step(
    state: &MenuState,
    cmd: Option<&Command>,
    dt: Millis,
    catalog: &MenuCatalog,
) -> (MenuState, Vec<MenuAction>) {
    let mut next = state.clone();
    let mut actions = vec![];
    if next.is_open() {
        next.cycle_elapsed_ms += dt;
    }
    let open_level = match cmd {
        Some(Command::ActivateMainMenu) => Some(MenuLevel::Main),
        Some(Command::ActivateSecondaryMenu) => Some(MenuLevel::Secondary),
        Some(Command::ActivateTertiaryMenu) => Some(MenuLevel::Tertiary),
        _ => None,
    };
    if let Some(level) = open_level {
        let items = catalog.items(level);
        if items.is_empty() {
            actions.push(MenuAction::Diagnostic { message: format!("{level:?} menu has no items here") });
            return (MenuState::hidden(), actions);
        }
        next = MenuState { level, items: items.to_vec(), selected: 0, cycle_elapsed_ms: 0 };
        actions.push(MenuAction::Opened { level });
        return (next, actions);
    }
    match cmd {
        Some(Command::SwitchMenuItem) if next.is_open() => {
            next.selected = (next.selected + 1) % next.items.len();
            next.cycle_elapsed_ms = 0;
            actions.push(MenuAction::Selected { index: next.selected });
        }
        Some(Command::ReleaseMenu) => {
            if next.is_open() {
                actions.push(MenuAction::InvokeItem {
                    level: next.level,
                    index: next.selected,
                    label: next.items[next.selected].clone(),
                });
                actions.push(MenuAction::Closed);
                next = MenuState::hidden();
            } else {
                actions.push(MenuAction::Diagnostic { message: "release without an open menu".into() });
            }
        }
        _ => {}
    }
    (next, actions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(kind: GestureKind, fingers: u8, zone: Zone) -> GestureEvent {
        GestureEvent {
            kind,
            fingers,
            zone,
            position: Point::new(5.0, 20.0),
            fine_position: Point::new(5.25, 20.0),
            t_start: 0,
            t_end: 0,
        }
    }

    fn catalog() -> MenuCatalog {
        MenuCatalog {
            main: MAIN_MENU.iter().map(|s| s.to_string()).collect(),
            secondary: DRAW_MENU.iter().map(|s| s.to_string()).collect(),
            tertiary: vec![],
        }
    }

    #[test]
    fn table_entries() {
        let ctx = Context::default();
        use GestureKind::*;
        assert_eq!(map_gesture(&ev(LongPressStart, 1, Zone::Left), &ctx), Some(Command::ActivateMainMenu));
        assert_eq!(map_gesture(&ev(LongPressStart, 2, Zone::Left), &ctx), Some(Command::ActivateSecondaryMenu));
        assert_eq!(map_gesture(&ev(LongPressStart, 1, Zone::Right), &ctx), Some(Command::ActivateTertiaryMenu));
        assert_eq!(map_gesture(&ev(LongPressStart, 2, Zone::Right), &ctx), Some(Command::ToggleMoveDraw));
        assert_eq!(map_gesture(&ev(DoubleTap, 1, Zone::Top), &ctx), Some(Command::Confirm));
        assert_eq!(map_gesture(&ev(Tap, 2, Zone::Any), &ctx), Some(Command::Undo));
        assert_eq!(map_gesture(&ev(Tap, 1, Zone::Left), &ctx), None);
        assert_eq!(map_gesture(&ev(LongPressHold, 1, Zone::Left), &ctx), None);
    }

    #[test]
    fn menu_open_context() {
        let ctx = Context { menu_open: true, ..Context::default() };
        use GestureKind::*;
        assert_eq!(map_gesture(&ev(LongPressHold, 1, Zone::Left), &ctx), Some(Command::SwitchMenuItem));
        assert_eq!(map_gesture(&ev(LongPressEnd, 2, Zone::Right), &ctx), Some(Command::ReleaseMenu));
    }

    #[test]
    fn property_context() {
        let ctx = Context { property_focus: true, ..Context::default() };
        use GestureKind::*;
        let h = Axis::Horizontal;
        let v = Axis::Vertical;
        assert_eq!(map_gesture(&ev(Tap, 1, Zone::Left), &ctx), Some(Command::PropertyDec { axis: h }));
        assert_eq!(map_gesture(&ev(Tap, 1, Zone::Right), &ctx), Some(Command::PropertyInc { axis: h }));
        assert_eq!(map_gesture(&ev(Tap, 1, Zone::Top), &ctx), Some(Command::PropertyInc { axis: v }));
        assert_eq!(map_gesture(&ev(Tap, 1, Zone::Bottom), &ctx), Some(Command::PropertyDec { axis: v }));
        assert_eq!(map_gesture(&ev(LongPressStart, 1, Zone::Left), &ctx), Some(Command::PropertyDecRepeat { axis: h }));
        assert_eq!(map_gesture(&ev(LongPressHold, 1, Zone::Top), &ctx), Some(Command::PropertyIncRepeat { axis: v }));
        assert_eq!(map_gesture(&ev(Tap, 2, Zone::Any), &ctx), Some(Command::Undo));
    }

    #[test]
    fn drags_follow_mode() {
        use GestureKind::*;
        let at = Point::new(5.25, 20.0);
        let draw = Context::default();
        assert_eq!(map_gesture(&ev(DragStart, 1, Zone::Left), &draw), Some(Command::StrokeBegin { at }));
        assert_eq!(map_gesture(&ev(DragEnd, 1, Zone::Left), &draw), Some(Command::StrokeEnd));
        let mv = Context { mode: Mode::Move, ..draw };
        assert_eq!(map_gesture(&ev(DragMove, 1, Zone::Left), &mv), Some(Command::MoveTo { at }));
        let er = Context { mode: Mode::Erase, ..draw };
        assert_eq!(map_gesture(&ev(DragStart, 1, Zone::Left), &er), Some(Command::EraseBegin { at }));
        assert_eq!(map_gesture(&ev(DragStart, 2, Zone::Left), &draw), None);
    }

    #[test]
    fn open_cycle_wrap_release() {
        let cat = catalog();
        let (s, a) = menu_step(&MenuState::hidden(), Some(&Command::ActivateMainMenu), 0, &cat);
        assert_eq!(a, vec![MenuAction::Opened { level: MenuLevel::Main }]);
        assert_eq!((s.selected, s.selected_item()), (0, Some("Move")));
        let (s, _) = menu_step(&s, Some(&Command::SwitchMenuItem), 800, &cat);
        let (s, _) = menu_step(&s, Some(&Command::SwitchMenuItem), 800, &cat);
        assert_eq!(s.selected_item(), Some("Erase"));
        let five = MenuState { selected: 5, ..s.clone() };
        assert_eq!(menu_step(&five, Some(&Command::SwitchMenuItem), 0, &cat).0.selected, 0);
        let (h, a) = menu_step(&s, Some(&Command::ReleaseMenu), 10, &cat);
        assert_eq!(h, MenuState::hidden());
        assert_eq!(
            a[0],
            MenuAction::InvokeItem { level: MenuLevel::Main, index: 2, label: "Erase".into() }
        );
    }

    #[test]
    fn cycling_visits_every_item_once_per_round() {
        let cat = catalog();
        let (mut s, _) = menu_step(&MenuState::hidden(), Some(&Command::ActivateMainMenu), 0, &cat);
        let mut seen = vec![s.selected];
        for _ in 0..5 {
            s = menu_step(&s, Some(&Command::SwitchMenuItem), 800, &cat).0;
            seen.push(s.selected);
        }
        assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn release_without_open_is_a_diagnostic() {
        let (s, a) = menu_step(&MenuState::hidden(), Some(&Command::ReleaseMenu), 5, &catalog());
        assert_eq!(s, MenuState::hidden());
        assert!(matches!(a[..], [MenuAction::Diagnostic { .. }]));
    }

    #[test]
    fn empty_level_stays_hidden() {
        let (s, a) = menu_step(&MenuState::hidden(), Some(&Command::ActivateTertiaryMenu), 0, &catalog());
        assert!(!s.is_open());
        assert!(s.items.is_empty());
        assert!(matches!(a[..], [MenuAction::Diagnostic { .. }]));
    }

    #[test]
    fn elapsed_time_accumulates_only_while_open() {
        let cat = catalog();
        assert_eq!(menu_step(&MenuState::hidden(), None, 100, &cat).0.cycle_elapsed_ms, 0);
        let (s, _) = menu_step(&MenuState::hidden(), Some(&Command::ActivateMainMenu), 0, &cat);
        let (s, _) = menu_step(&s, None, 300, &cat);
        assert_eq!(s.cycle_elapsed_ms, 300);
    }
}

//! Drive the menu state machine directly: open the main menu, let the
//! hold ticks cycle through items, release to invoke.

use wristsketch::command::{menu_step, Command, MenuCatalog, MenuState, DRAW_MENU, MAIN_MENU};

fn main() {
    let owned = |items: &[&str]| items.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let catalog = MenuCatalog { main: owned(&MAIN_MENU), secondary: owned(&DRAW_MENU), tertiary: vec![] };
    let mut state = MenuState::hidden();
    let script = [
        (0, Command::ActivateMainMenu),
        (800, Command::SwitchMenuItem),
        (800, Command::SwitchMenuItem),
        (800, Command::SwitchMenuItem),
        (300, Command::ReleaseMenu),
    ];
    for (dt, cmd) in script {
        let (next, actions) = menu_step(&state, Some(&cmd), dt, &catalog);
        state = next;
        println!("{:<22} -> {:?} selected={:?} actions={actions:?}", cmd.name(), state.level, state.selected_item());
    }
    // Opening a level with no items reports instead of showing an empty menu.
    let (_, actions) = menu_step(&state, Some(&Command::ActivateTertiaryMenu), 0, &catalog);
    println!("tertiary with nothing bound: {actions:?}");
}

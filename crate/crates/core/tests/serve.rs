use std::net::TcpListener;
use std::thread;

use serde_json::Value;
use tungstenite::{connect, Message};

use wristsketch::serve::handle_connection;
use wristsketch::session::{ClientMessage, SessionConfig};
use wristsketch::sketch::SketchDocument;
use wristsketch::synth::{script_to_stream, FingerModel, GestureScript, Keyframe, NoiseModel};

type Client = tungstenite::WebSocket<tungstenite::stream::MaybeTlsStream<std::net::TcpStream>>;

fn start() -> Client {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || {
        let (stream, _) = listener.accept().unwrap();
        handle_connection(stream, SessionConfig::default()).unwrap();
    });
    connect(format!("ws://{addr}")).unwrap().0
}

/// Send one message and collect replies up to and including the scene frame
/// (frames) or the single reply (other messages).
fn exchange(ws: &mut Client, msg: &str, until_scene: bool) -> Vec<Value> {
    ws.send(Message::Text(msg.into())).unwrap();
    let mut out = vec![];
    loop {
        let Message::Text(t) = ws.read().unwrap() else { continue };
        let v: Value = serde_json::from_str(&t).unwrap();
        let done = !until_scene || v["type"] == "scene";
        out.push(v);
        if done {
            return out;
        }
    }
}

fn play(ws: &mut Client, timeline: Vec<Keyframe>) -> Vec<Value> {
    let frames = script_to_stream(&GestureScript { label: None, timeline }, &NoiseModel::none(0)).unwrap();
    let mut out = vec![];
    for f in &frames {
        let msg = serde_json::to_string(&ClientMessage::from_frame(f)).unwrap();
        out.extend(exchange(ws, &msg, true));
    }
    out
}

fn key(t_ms: f64, at: Option<(f64, f64)>) -> Keyframe {
    Keyframe { t_ms, fingers: at.map(|(x, y)| vec![FingerModel::at(x, y)]).unwrap_or_default() }
}

#[test]
fn long_press_opens_main_menu_and_short_click_does_not() {
    let mut ws = start();
    let out = play(&mut ws, vec![key(100.0, Some((5.0, 20.0))), key(1300.0, Some((5.0, 20.0))), key(1320.0, None), key(1400.0, None)]);
    let lp = out.iter().position(|v| v["type"] == "gesture" && v["kind"] == "LongPressStart").expect("long press");
    assert_eq!(out[lp + 1]["type"], "command");
    assert_eq!(out[lp + 1]["command"], "ActivateMainMenu");
    assert_eq!(out[lp + 2]["type"], "menu");
    assert_eq!(out[lp + 2]["menu"]["level"], "Main");
    assert_eq!(out[lp + 2]["menu"]["items"][0], "Move");

    let out = play(&mut ws, vec![key(3000.0, Some((5.0, 20.0))), key(3100.0, None), key(3800.0, None)]);
    let gestures: Vec<_> = out.iter().filter(|v| v["type"] == "gesture").collect();
    assert_eq!(gestures.len(), 1);
    assert_eq!(gestures[0]["kind"], "Tap");
    assert!(!out.iter().any(|v| v["command"] == "ActivateMainMenu"));
}

#[test]
fn drawn_stroke_matches_document() {
    let mut ws = start();
    let out = play(
        &mut ws,
        vec![key(100.0, Some((8.0, 30.0))), key(200.0, Some((8.0, 30.0))), key(900.0, Some((30.0, 26.0))), key(920.0, None), key(1000.0, None)],
    );
    assert!(out.iter().any(|v| v["command"] == "StrokeBegin"));
    assert!(out.iter().any(|v| v["command"] == "StrokeEnd"));
    let scene = out.iter().rev().find(|v| v["type"] == "scene").unwrap();
    let reply = exchange(&mut ws, r#"{"type":"document"}"#, false);
    assert_eq!(reply[0]["type"], "document");
    let doc: SketchDocument = serde_json::from_value(reply[0]["document"].clone()).unwrap();
    let strokes: Vec<_> = doc.canvas_strokes().map(|(_, s)| serde_json::to_value(s.points).unwrap()).collect();
    assert_eq!(strokes.len(), 1);
    assert_eq!(scene["strokes"][0]["points"], strokes[0]);
    assert!(strokes[0].as_array().unwrap().len() > 10);
}

#[test]
fn bad_messages_get_diagnostics() {
    let mut ws = start();
    let r = exchange(&mut ws, "not json", false);
    assert_eq!(r[0]["type"], "diagnostic");
    let r = exchange(&mut ws, r#"{"type":"frame","seq":0,"t":0,"cells":[[99,0,5]]}"#, false);
    assert_eq!(r[0]["type"], "diagnostic");
    let r = exchange(&mut ws, r#"{"type":"config","vote_n":0}"#, false);
    assert_eq!(r[0]["type"], "diagnostic");
    // The connection still works afterwards.
    let r = exchange(&mut ws, r#"{"type":"frame","seq":1,"t":16,"cells":[]}"#, true);
    assert_eq!(r.last().unwrap()["type"], "scene");
}

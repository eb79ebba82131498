//! Drive a session with protocol messages, as the web client does, and print
//! the replies. Pass `--serve` to also open a WebSocket server on port 8765.

use wristsketch::session::{ClientMessage, ServerMessage, Session, SessionConfig};
use wristsketch::synth::{script_to_stream, FingerModel, GestureScript, Keyframe, NoiseModel};

fn main() {
    if std::env::args().any(|a| a == "--serve") {
        let listener = std::net::TcpListener::bind("127.0.0.1:8765").expect("port 8765 free");
        println!("listening on ws://127.0.0.1:8765");
        wristsketch::serve::serve(listener, SessionConfig::default()).unwrap();
        return;
    }
    let press = vec![FingerModel::at(5.0, 20.0)];
    let timeline = vec![
        Keyframe { t_ms: 100.0, fingers: press.clone() },
        Keyframe { t_ms: 2000.0, fingers: press },
        Keyframe { t_ms: 2020.0, fingers: vec![] },
        Keyframe { t_ms: 2400.0, fingers: vec![] },
    ];
    let frames = script_to_stream(&GestureScript { label: None, timeline }, &NoiseModel::none(0)).unwrap();

    let mut session = Session::new(SessionConfig::default());
    for f in &frames {
        let text = serde_json::to_string(&ClientMessage::from_frame(f)).unwrap();
        let msg: ClientMessage = serde_json::from_str(&text).unwrap();
        for reply in session.handle(msg).unwrap() {
            if !matches!(reply, ServerMessage::Scene(_)) {
                println!("{}", reply.to_json());
            }
        }
    }
    println!("mode after release: {:?}", session.doc.mode);
}

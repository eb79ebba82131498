//! WebSocket front end for [`Session`]: one session per connection.
//!
//! Each text message from the client is one [`ClientMessage`]; every reply
//! is one [`ServerMessage`] per text message. Malformed input gets a
//! diagnostic reply and the connection stays open.

use std::io;
use std::net::{TcpListener, TcpStream};
use std::thread;

use tungstenite::{accept, Message};

use crate::session::{ClientMessage, DiagnosticMsg, ServerMessage, Session, SessionConfig};

/// Serve one connection until the client closes it.
#[allow(clippy::result_large_err)]
pub fn handle_connection(stream: TcpStream, cfg: SessionConfig) -> Result<(), tungstenite::Error> {
    let mut ws = accept(stream).map_err(|e| match e {
        tungstenite::HandshakeError::Failure(e) => e,
        tungstenite::HandshakeError::Interrupted(_) => tungstenite::Error::Io(io::ErrorKind::WouldBlock.into()),
    })?;
    let mut session = Session::new(cfg);
    let mut last_t = 0;
    loop {
        let text = match ws.read() {
            Ok(Message::Text(t)) => t,
            Ok(Message::Close(_)) | Err(tungstenite::Error::ConnectionClosed) => return Ok(()),
            Ok(_) => continue,
            Err(e) => return Err(e),
        };
        let replies = match serde_json::from_str::<ClientMessage>(&text) {
            Ok(msg) => {
                if let ClientMessage::Frame { t, .. } = &msg {
                    last_t = *t as u64;
                }
                session.handle(msg).unwrap_or_else(|message| vec![diagnostic(last_t, message)])
            }
            Err(e) => vec![diagnostic(last_t, format!("bad message: {e}"))],
        };
        for r in replies {
            ws.send(Message::Text(r.to_json()))?;
        }
    }
}

fn diagnostic(t: u64, message: String) -> ServerMessage {
    ServerMessage::Diagnostic(DiagnosticMsg { t, message })
}

/// Accept connections forever, each on its own thread.
pub fn serve(listener: TcpListener, cfg: SessionConfig) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let cfg = cfg.clone();
        thread::spawn(move || {
            if let Err(e) = handle_connection(stream, cfg) {
                eprintln!("connection ended: {e}");
            }
        });
    }
    Ok(())
}

//! Binary `.wsk` records and the `.wskx` hex text fixtures.
//!
//! A record is 1608 bytes: magic `A5 5A`, `u16` LE seq, `u32` LE
//! timestamp in ms, then 1600 pressure bytes row-major.

use std::io::{self, BufRead, Read, Write};
use std::path::Path;

use super::{FrameError, PressureFrame, CELLS};

pub const MAGIC: [u8; 2] = [0xA5, 0x5A];
pub const RECORD_LEN: usize = 2 + 2 + 4 + CELLS;

/// On-disk flavour of a frame stream, chosen by file extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameFormat {
    Binary,
    Text,
}

impl FrameFormat {
    /// `.wskx` is text; anything else is treated as binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("wskx") => FrameFormat::Text,
            _ => FrameFormat::Binary,
        }
    }
}

pub fn encode_frame_record(frame: &PressureFrame) -> [u8; RECORD_LEN] {
    let mut out = [0u8; RECORD_LEN];
    out[..2].copy_from_slice(&MAGIC);
    out[2..4].copy_from_slice(&frame.seq.to_le_bytes());
    out[4..8].copy_from_slice(&frame.timestamp_ms.to_le_bytes());
    out[8..].copy_from_slice(frame.cells());
    out
}

/// Decode the record at the start of `bytes`.
pub fn parse_frame_record(bytes: &[u8]) -> Result<PressureFrame, FrameError> {
    if bytes.len() >= 2 && bytes[..2] != MAGIC {
        return Err(FrameError::BadMagic(bytes[0], bytes[1]));
    }
    if bytes.len() < RECORD_LEN {
        return Err(FrameError::Truncated(bytes.len()));
    }
    let seq = u16::from_le_bytes([bytes[2], bytes[3]]);
    let timestamp_ms = u32::from_le_bytes([bytes[4], bytes[5], bytes[6], bytes[7]]);
    let mut cells = [0u8; CELLS];
    cells.copy_from_slice(&bytes[8..RECORD_LEN]);
    Ok(PressureFrame::from_cells(seq, timestamp_ms, cells))
}

fn invalid(e: FrameError) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, e)
}

/// Read a whole binary replay stream. A partial trailing record is an error.
pub fn read_replay<R: Read>(mut reader: R) -> io::Result<Vec<PressureFrame>> {
    let mut buf = Vec::new();
    reader.read_to_end(&mut buf)?;
    buf.chunks(RECORD_LEN)
        .map(|chunk| parse_frame_record(chunk).map_err(invalid))
        .collect()
}

pub fn write_replay<W: Write>(mut writer: W, frames: &[PressureFrame]) -> io::Result<()> {
    for f in frames {
        writer.write_all(&encode_frame_record(f))?;
    }
    writer.flush()
}

const HEX: &[u8; 16] = b"0123456789ABCDEF";

pub fn write_text_fixture<W: Write>(mut writer: W, frames: &[PressureFrame]) -> io::Result<()> {
    let mut line = String::with_capacity(CELLS * 2 + 24);
    for f in frames {
        line.clear();
        line.push_str(&format!("{},{},", f.seq, f.timestamp_ms));
        for &b in f.cells() {
            line.push(HEX[(b >> 4) as usize] as char);
            line.push(HEX[(b & 0xF) as usize] as char);
        }
        line.push('\n');
        writer.write_all(line.as_bytes())?;
    }
    writer.flush()
}

fn hex_val(c: u8) -> Option<u8> {
    match c {
        b'0'..=b'9' => Some(c - b'0'),
        b'A'..=b'F' => Some(c - b'A' + 10),
        b'a'..=b'f' => Some(c - b'a' + 10),
        _ => None,
    }
}

fn parse_fixture_line(line: &str, lineno: usize) -> Result<PressureFrame, FrameError> {
    let bad = |reason: &str| FrameError::BadFixtureLine { line: lineno, reason: reason.to_string() };
    let mut parts = line.splitn(3, ',');
    let seq = parts.next().and_then(|s| s.trim().parse::<u16>().ok()).ok_or_else(|| bad("bad seq"))?;
    let t = parts.next().and_then(|s| s.trim().parse::<u32>().ok()).ok_or_else(|| bad("bad timestamp"))?;
    let hex = parts.next().ok_or_else(|| bad("missing cells"))?.trim().as_bytes();
    if hex.len() != CELLS * 2 {
        return Err(bad(&format!("expected {} hex chars, got {}", CELLS * 2, hex.len())));
    }
    let mut cells = [0u8; CELLS];
    for (i, pair) in hex.chunks(2).enumerate() {
        let hi = hex_val(pair[0]).ok_or_else(|| bad("non-hex character"))?;
        let lo = hex_val(pair[1]).ok_or_else(|| bad("non-hex character"))?;
        cells[i] = hi << 4 | lo;
    }
    Ok(PressureFrame::from_cells(seq, t, cells))
}

/// Read a `.wskx` fixture. Blank lines and `#` comments are skipped.
pub fn read_text_fixture<R: BufRead>(reader: R) -> io::Result<Vec<PressureFrame>> {
    let mut frames = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        frames.push(parse_fixture_line(trimmed, i + 1).map_err(invalid)?);
    }
    Ok(frames)
}

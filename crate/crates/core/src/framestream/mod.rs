//! Pressure frames: the raw 40×40 input of the pipeline, its replay formats,
//! and the threshold + median preprocessing stage.

mod codec;
mod filter;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use codec::{
    encode_frame_record, parse_frame_record, read_replay, read_text_fixture, write_replay,
    write_text_fixture, FrameFormat, MAGIC, RECORD_LEN,
};
pub use filter::{apply_threshold, median_filter, preprocess};

/// Cells per side of the sensing grid.
pub const GRID: usize = 40;
/// Total cells in one frame.
pub const CELLS: usize = GRID * GRID;
/// Nominal sensor frame rate.
pub const SENSOR_FPS: u32 = 60;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("bad record magic {0:02X} {1:02X}")]
    BadMagic(u8, u8),
    #[error("truncated record: {0} bytes, need {RECORD_LEN}")]
    Truncated(usize),
    #[error("median window {0} is not odd")]
    EvenWindow(usize),
    #[error("fixture line {line}: {reason}")]
    BadFixtureLine { line: usize, reason: String },
    #[error("frame {seq} does not advance after {prev}")]
    NonMonotonicSeq { prev: u16, seq: u16 },
}

/// One timestamped snapshot of the 40×40 pressure grid.
///
/// Cells are stored row-major: `(x, y)` lives at `y * 40 + x`, x rightward,
/// y downward. `seq` is a 16-bit counter and wraps after 65535.
#[derive(Clone, PartialEq, Eq)]
pub struct PressureFrame {
    pub seq: u16,
    pub timestamp_ms: u32,
    cells: [u8; CELLS],
}

impl PressureFrame {
    pub fn zeroed(seq: u16, timestamp_ms: u32) -> Self {
        Self { seq, timestamp_ms, cells: [0; CELLS] }
    }

    pub fn from_cells(seq: u16, timestamp_ms: u32, cells: [u8; CELLS]) -> Self {
        Self { seq, timestamp_ms, cells }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.cells[y * GRID + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.cells[y * GRID + x] = value;
    }

    pub fn cells(&self) -> &[u8; CELLS] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [u8; CELLS] {
        &mut self.cells
    }

    /// Nonzero cells as `(x, y, pressure)`, row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0)
            .map(|(i, &p)| (i % GRID, i / GRID, p))
    }

    pub fn is_blank(&self) -> bool {
        self.cells.iter().all(|&p| p == 0)
    }
}

impl std::fmt::Debug for PressureFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PressureFrame")
            .field("seq", &self.seq)
            .field("timestamp_ms", &self.timestamp_ms)
            .field("nonzero", &self.nonzero().count())
            .finish()
    }
}

/// Threshold and median window applied before blob detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessConfig {
    pub threshold_tau: u8,
    pub median_window: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self { threshold_tau: 16, median_window: 3 }
    }
}

/// Check that `seq` strictly advances (modulo 2^16) through a stream.
pub fn check_sequence(frames: &[PressureFrame]) -> Result<(), FrameError> {
    for pair in frames.windows(2) {
        let (prev, seq) = (pair[0].seq, pair[1].seq);
        let step = seq.wrapping_sub(prev);
        if step == 0 || step > u16::MAX / 2 {
            return Err(FrameError::NonMonotonicSeq { prev, seq });
        }
    }
    Ok(())
}

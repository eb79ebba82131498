use super::{FrameError, PreprocessConfig, PressureFrame, GRID};

/// Zero every cell below `tau`; cells at or above it are kept as-is.
pub fn apply_threshold(frame: &PressureFrame, tau: u8) -> PressureFrame {
    let mut out = frame.clone();
    for c in out.cells_mut().iter_mut() {
        if *c < tau {
            *c = 0;
        }
    }
    out
}

/// Square median filter with replicate (clamped) borders.
pub fn median_filter(frame: &PressureFrame, window: usize) -> Result<PressureFrame, FrameError> {
    if window.is_multiple_of(2) {
        return Err(FrameError::EvenWindow(window));
    }
    if window == 1 {
        return Ok(frame.clone());
    }
    let half = (window / 2) as isize;
    let last = GRID as isize - 1;
    let mut out = frame.clone();
    let mut buf = Vec::with_capacity(window * window);
    for y in 0..GRID {
        for x in 0..GRID {
            buf.clear();
            for dy in -half..=half {
                let sy = (y as isize + dy).clamp(0, last) as usize;
                for dx in -half..=half {
                    let sx = (x as isize + dx).clamp(0, last) as usize;
                    buf.push(frame.get(sx, sy));
                }
            }
            let mid = buf.len() / 2;
            let (_, m, _) = buf.select_nth_unstable(mid);
            out.set(x, y, *m);
        }
    }
    Ok(out)
}

/// Threshold first, then median filter.
pub fn preprocess(frame: &PressureFrame, cfg: &PreprocessConfig) -> Result<PressureFrame, FrameError> {
    median_filter(&apply_threshold(frame, cfg.threshold_tau), cfg.median_window)
}

//! The `wristsketch` command line.
//!
//! Exit codes: 0 ok, 2 bad arguments, 3 bad input data. Failures also print
//! one JSON line `{"error": ..., "code": ...}` on stderr.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::framestream::{read_replay, read_text_fixture, write_replay, write_text_fixture, FrameFormat, PressureFrame, SENSOR_FPS};
use crate::geom::Point;
use crate::gesture::GestureEvent;
use crate::metrics::{accuracy, drawing_error, resample_polyline, score_events, DeConfig, Template, TruthLabel, CLASS_LABELS};
use crate::session::{run_session, Pipeline, ServerMessage, SessionConfig};
use crate::synth::{gesture_suite, script_to_stream, GestureScript, NoiseModel};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn input<E: std::fmt::Display>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Input(format!("{ctx}: {e}"))
}

#[derive(Debug, Parser)]
#[command(name = "wristsketch", version, about = "Pressure-pad gesture sketching pipeline")]
struct Cli {
    /// JSON file overriding session settings (thresholds, vote window, canvas, seed).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Synthesize a frame stream from a gesture script or the evaluation suite.
    Gen {
        /// Gesture script JSON (omit with --suite).
        script: Option<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
        /// Generate the 12-class suite with this many instances per class.
        #[arg(long)]
        suite: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `none`, `nominal`, or `salt=P,dropout=P`.
        #[arg(long, default_value = "none")]
        noise: String,
        /// Write ground-truth labels (JSON Lines).
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Stream gesture events and commands as JSON Lines.
    Recognize {
        input: PathBuf,
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Run the full session and dump the document or one scene frame.
    Replay {
        input: PathBuf,
        #[arg(long)]
        doc: Option<PathBuf>,
        /// Scene time in milliseconds.
        #[arg(long)]
        scene_at: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Measure frames per second of the recognition pipeline.
    Bench {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
    },
    /// Confusion matrix and accuracy of recognized events against labels.
    Score {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Drawing error of a polyline against a template.
    De {
        #[arg(long)]
        drawing: PathBuf,
        /// `rect`, `tri`, `circle`, or a JSON file of outline points.
        #[arg(long)]
        template: String,
        /// Resample drawing and template before scoring.
        #[arg(long)]
        resample: bool,
    },
    /// Serve the session protocol over WebSocket.
    Serve {
        #[arg(long, default_value_t = 8765)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

/// Run with full argv (including the program name) and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            report(&CliError::Usage(e.kind().to_string()));
            return 2;
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            report(&e);
            e.code()
        }
    }
}

fn report(e: &CliError) {
    #[derive(Serialize)]
    struct Line<'a> {
        error: &'a str,
        code: i32,
    }
    let msg = e.to_string();
    eprintln!("{}", serde_json::to_string(&Line { error: &msg, code: e.code() }).expect("plain struct"));
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Gen { script, out: path, suite, seed, noise, labels } => gen(script, &path, suite, seed, &noise, labels),
        Cmd::Recognize { input, events } => {
            let frames = read_frames(&input)?;
            match events {
                Some(p) => {
                    let mut w = BufWriter::new(create(&p)?);
                    recognize(&frames, &cfg, &mut w)?;
                    w.flush().map_err(input_io(&p))
                }
                None => recognize(&frames, &cfg, out),
            }
        }
        Cmd::Replay { input, doc, scene_at, seed } => {
            let mut cfg = cfg;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            replay(&read_frames(&input)?, &cfg, doc.as_deref(), scene_at, out)
        }
        Cmd::Bench { input, repeat } => bench(&read_frames(&input)?, &cfg, repeat.max(1), out),
        Cmd::Score { pred, truth, json } => score(&pred, &truth, json, out),
        Cmd::De { drawing, template, resample } => de(&drawing, &template, resample, out),
        Cmd::Serve { port, host } => {
            let listener = TcpListener::bind((host.as_str(), port)).map_err(|e| CliError::Usage(format!("bind {host}:{port}: {e}")))?;
            let addr = listener.local_addr().map_err(|e| CliError::Usage(e.to_string()))?;
            writeln!(out, "{{\"listening\":\"ws://{addr}\"}}").ok();
            out.flush().ok();
            crate::serve::serve(listener, cfg).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

fn input_io(p: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", p.display()))
}

fn create(p: &Path) -> Result<File> {
    File::create(p).map_err(input_io(p))
}

fn open(p: &Path) -> Result<File> {
    File::open(p).map_err(input_io(p))
}

fn load_config(path: Option<&Path>) -> Result<SessionConfig> {
    let Some(p) = path else { return Ok(SessionConfig::default()) };
    let cfg: SessionConfig = serde_json::from_reader(BufReader::new(open(p)?)).map_err(input(p.display()))?;
    cfg.validate().map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    Ok(cfg)
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T> {
    serde_json::from_reader(BufReader::new(open(p)?)).map_err(input(p.display()))
}

pub fn read_frames(p: &Path) -> Result<Vec<PressureFrame>> {
    let f = open(p)?;
    let frames = match FrameFormat::from_path(p) {
        FrameFormat::Binary => read_replay(BufReader::new(f)),
        FrameFormat::Text => read_text_fixture(BufReader::new(f)),
    };
    frames.map_err(input_io(p))
}

fn write_frames(p: &Path, frames: &[PressureFrame]) -> Result<()> {
    let mut w = BufWriter::new(create(p)?);
    match FrameFormat::from_path(p) {
        FrameFormat::Binary => write_replay(&mut w, frames),
        FrameFormat::Text => write_text_fixture(&mut w, frames),
    }
    .and_then(|_| w.flush())
    .map_err(input_io(p))
}

/// `none`, `nominal`, or comma-separated `salt=P` / `dropout=P`.
pub fn parse_noise(spec: &str, seed: u64) -> std::result::Result<NoiseModel, String> {
    match spec {
        "none" => return Ok(NoiseModel::none(seed)),
        "nominal" => return Ok(NoiseModel::nominal(seed)),
        _ => {}
    }
    let mut n = NoiseModel::none(seed);
    for part in spec.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("bad noise term {part:?}"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("bad probability {v:?}"))?;
        match k.trim() {
            "salt" => n.salt_prob = v,
            "dropout" => n.dropout_prob = v,
            other => return Err(format!("unknown noise term {other:?}")),
        }
    }
    n.validate().map_err(|e| e.to_string())?;
    Ok(n)
}

fn gen(script: Option<PathBuf>, path: &Path, suite: Option<usize>, seed: u64, noise: &str, labels: Option<PathBuf>) -> Result<()> {
    let noise = parse_noise(noise, seed).map_err(CliError::Usage)?;
    let (script, truth) = match (script, suite) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either a script or --suite, not both".into())),
        (None, None) => return Err(CliError::Usage("a script path or --suite is required".into())),
        (None, Some(n)) => {
            let s = gesture_suite(n, seed);
            (s.script, s.truth)
        }
        (Some(p), None) => {
            let script: GestureScript = read_json(&p)?;
            let truth = script
                .label
                .iter()
                .map(|l| TruthLabel { trial: 0, label: l.clone(), t_start: 0, t_end: script.duration_ms().ceil() as u64 + 1 })
                .collect();
            (script, truth)
        }
    };
    let frames = script_to_stream(&script, &noise).map_err(|e| CliError::Input(e.to_string()))?;
    write_frames(path, &frames)?;
    if let Some(lp) = labels {
        let mut w = BufWriter::new(create(&lp)?);
        for t in &truth {
            writeln!(w, "{}", serde_json::to_string(t).expect("plain struct")).map_err(input_io(&lp))?;
        }
        w.flush().map_err(input_io(&lp))?;
    }
    Ok(())
}

/// Gesture and command lines for a whole stream.
pub fn recognize(frames: &[PressureFrame], cfg: &SessionConfig, out: &mut dyn Write) -> Result<()> {
    let (_, msgs) = run_session(frames, cfg).map_err(|e| CliError::Input(e.to_string()))?;
    for m in msgs.iter().filter(|m| matches!(m, ServerMessage::Gesture(_) | ServerMessage::Command(_))) {
        writeln!(out, "{}", m.to_json()).map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(())
}

fn replay(frames: &[PressureFrame], cfg: &SessionConfig, doc: Option<&Path>, scene_at: Option<u64>, out: &mut dyn Write) -> Result<()> {
    let (session, msgs) = run_session(frames, cfg).map_err(|e| CliError::Input(e.to_string()))?;
    let doc_json = session.doc.to_json();
    let w = |out: &mut dyn Write, s: &str| writeln!(out, "{s}").map_err(|e| CliError::Input(e.to_string()));
    if let Some(p) = doc {
        let mut f = create(p)?;
        f.write_all(doc_json.as_bytes()).and_then(|_| f.write_all(b"\n")).map_err(input_io(p))?;
    }
    match scene_at {
        Some(t) => w(out, &serde_json::to_string(&session.scene(t)).expect("scene serializes")),
        None if doc.is_none() => w(out, &doc_json),
        None => {
            #[derive(Serialize)]
            struct Summary {
                frames: usize,
                messages: usize,
                assets: usize,
                strokes: usize,
            }
            let s = Summary {
                frames: frames.len(),
                messages: msgs.len(),
                assets: session.doc.assets.len(),
                strokes: session.doc.assets.iter().map(|a| a.strokes.len()).sum(),
            };
            w(out, &serde_json::to_string(&s).expect("plain struct"))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub frames: usize,
    pub seconds: f64,
    pub fps: f64,
    pub stream_fps: u32,
    pub events: usize,
}

/// Time preprocess, blobs, voting and the gesture machine over `repeat` passes.
pub fn bench_frames(frames: &[PressureFrame], cfg: &SessionConfig, repeat: usize) -> Result<BenchReport> {
    let start = Instant::now();
    let mut events = 0;
    for _ in 0..repeat {
        let mut p = Pipeline::new(cfg);
        for f in frames {
            events += p.push(f).map_err(|e| CliError::Input(e.to_string()))?.len();
        }
        events += p.finish().len();
    }
    let seconds = start.elapsed().as_secs_f64();
    let n = frames.len() * repeat;
    Ok(BenchReport { frames: n, seconds, fps: n as f64 / seconds.max(1e-12), stream_fps: SENSOR_FPS, events })
}

fn bench(frames: &[PressureFrame], cfg: &SessionConfig, repeat: usize, out: &mut dyn Write) -> Result<()> {
    if frames.is_empty() {
        return Err(CliError::Input("stream has no frames".into()));
    }
    let r = bench_frames(frames, cfg, repeat)?;
    writeln!(out, "{}", serde_json::to_string(&r).expect("plain struct")).map_err(|e| CliError::Input(e.to_string()))
}

/// Gesture events from a JSON Lines file of protocol messages or bare events.
pub fn read_events(p: &Path) -> Result<Vec<GestureEvent>> {
    let mut events = vec![];
    for (i, line) in BufReader::new(open(p)?).lines().enumerate() {
        let line = line.map_err(input_io(p))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ServerMessage>(&line) {
            Ok(ServerMessage::Gesture(e)) => events.push(e),
            Ok(_) => {}
            Err(_) => events.push(serde_json::from_str(&line).map_err(input(format!("{}:{}", p.display(), i + 1)))?),
        }
    }
    Ok(events)
}

fn read_labels(p: &Path) -> Result<Vec<TruthLabel>> {
    let mut labels = vec![];
    for (i, line) in BufReader::new(open(p)?).lines().enumerate() {
        let line = line.map_err(input_io(p))?;
        if !line.trim().is_empty() {
            labels.push(serde_json::from_str(&line).map_err(input(format!("{}:{}", p.display(), i + 1)))?);
        }
    }
    Ok(labels)
}

fn score(pred: &Path, truth: &Path, json: bool, out: &mut dyn Write) -> Result<()> {
    let events = read_events(pred)?;
    let labels = read_labels(truth)?;
    let cm = score_events(&events, &labels).map_err(|e| CliError::Input(e.to_string()))?;
    let acc = accuracy(&cm).map_err(|e| CliError::Input(e.to_string()))?;
    let text = if json {
        #[derive(Serialize)]
        struct Report<'a> {
            accuracy: f64,
            trials: u64,
            errors: u64,
            classes: &'a [&'a str],
            matrix: &'a crate::metrics::ConfusionMatrix,
        }
        let r = Report { accuracy: acc, trials: cm.total(), errors: cm.errors(), classes: &CLASS_LABELS, matrix: &cm };
        serde_json::to_string(&r).expect("plain struct")
    } else {
        format!("{}\naccuracy {:.4} ({} / {})", cm.to_table().trim_end(), acc, cm.trace(), cm.total())
    };
    writeln!(out, "{text}").map_err(|e| CliError::Input(e.to_string()))
}

fn read_points(p: &Path) -> Result<Vec<Point>> {
    read_json(p)
}

fn de(drawing: &Path, template: &str, resample: bool, out: &mut dyn Write) -> Result<()> {
    let cfg = DeConfig::default();
    let d = read_points(drawing)?;
    let t = match Template::parse(template) {
        Some(t) => resample_polyline(&t.outline(), cfg.template_samples, true),
        None => {
            let pts = read_points(Path::new(template))?;
            if resample {
                resample_polyline(&pts, cfg.template_samples, true)
            } else {
                Ok(pts)
            }
        }
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    let d = if resample { resample_polyline(&d, cfg.drawing_samples, false) } else { Ok(d) }.map_err(|e| CliError::Input(e.to_string()))?;
    let value = drawing_error(&d, &t).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(out, "{}", serde_json::json!({ "de": value })).map_err(|e| CliError::Input(e.to_string()))
}

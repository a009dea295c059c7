//! Replay backend: serves recorded detections keyed by frame id.
//!
//! File format, one record per line:
//!
//! ```text
//! # comment
//! #@ frames=240
//! frame_id, x_min, y_min, x_max, y_max, score [, synthetic_latency_ms]
//! ```
//!
//! Box coordinates are normalized to `[0, 1]`. `#@ key=value` lines are
//! comments to other readers; `frames` sets the stream length (otherwise
//! the highest recorded id plus one).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use thiserror::Error;

use super::{precise_wait, BackendError, DetectOutput, Detector, Frame};
use crate::geometry::{BoundingBox, Detection};

#[derive(Debug, Error)]
pub enum ReplayFormatError {
    #[error("replay line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("cannot read replay file {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplayBox {
    /// normalized coordinates
    pub bbox: BoundingBox,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplayFrame {
    pub boxes: Vec<ReplayBox>,
    pub latency_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplayTable {
    pub frames: BTreeMap<u64, ReplayFrame>,
    /// stream length from the `#@ frames=` directive
    pub frame_count: Option<u64>,
}

impl ReplayTable {
    pub fn push(&mut self, frame_id: u64, bbox: BoundingBox, score: f64) {
        self.frames.entry(frame_id).or_default().boxes.push(ReplayBox { bbox, score });
    }

    /// Frames in the stream: the directive if present, else max id + 1.
    pub fn stream_len(&self) -> u64 {
        self.frame_count.unwrap_or_else(|| self.frames.keys().next_back().map_or(0, |k| k + 1))
    }

    pub fn parse(text: &str) -> Result<Self, ReplayFormatError> {
        let mut table = ReplayTable::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| ReplayFormatError::Line { line, message };
            let s = raw.trim();
            if let Some(directive) = s.strip_prefix("#@") {
                for kv in directive.split_whitespace() {
                    if let Some(v) = kv.strip_prefix("frames=") {
                        table.frame_count = Some(v.parse().map_err(|_| err(format!("bad frame count {v:?}")))?);
                    }
                }
                continue;
            }
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = s.split(',').map(str::trim).collect();
            if f.len() != 6 && f.len() != 7 {
                return Err(err(format!("expected 6 or 7 fields, got {}", f.len())));
            }
            let frame_id: u64 = f[0].parse().map_err(|_| err(format!("bad frame id {:?}", f[0])))?;
            let num = |k: usize| -> Result<f64, ReplayFormatError> {
                let v: f64 = f[k].parse().map_err(|_| err(format!("not a number: {:?}", f[k])))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(err(format!("not finite: {:?}", f[k])))
                }
            };
            let bbox = BoundingBox::new(num(1)?, num(2)?, num(3)?, num(4)?).map_err(|e| err(e.to_string()))?;
            if bbox.x_min < 0.0 || bbox.y_min < 0.0 || bbox.x_max > 1.0 || bbox.y_max > 1.0 {
                return Err(err(format!("box {bbox} is not normalized to [0, 1]")));
            }
            let score = num(5)?;
            if !(0.0..=1.0).contains(&score) {
                return Err(err(format!("score {score} outside [0, 1]")));
            }
            let entry = table.frames.entry(frame_id).or_default();
            if f.len() == 7 {
                let ms = num(6)?;
                if ms < 0.0 {
                    return Err(err(format!("negative latency {ms}")));
                }
                match entry.latency_ms {
                    Some(prev) if prev != ms => {
                        return Err(err(format!("frame {frame_id} already has latency {prev} ms")));
                    }
                    _ => entry.latency_ms = Some(ms),
                }
            }
            entry.boxes.push(ReplayBox { bbox, score });
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, ReplayFormatError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ReplayFormatError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    /// Serializes so that `parse(dump())` reproduces the table.
    pub fn dump(&self) -> String {
        let mut s = String::from("# frame_id, x_min, y_min, x_max, y_max, score [, synthetic_latency_ms]\n");
        if let Some(n) = self.frame_count {
            let _ = writeln!(s, "#@ frames={n}");
        }
        for (id, fr) in &self.frames {
            for b in &fr.boxes {
                let r = &b.bbox;
                let _ = write!(s, "{id},{},{},{},{},{}", r.x_min, r.y_min, r.x_max, r.y_max, b.score);
                match fr.latency_ms {
                    Some(ms) => {
                        let _ = writeln!(s, ",{ms}");
                    }
                    None => s.push('\n'),
                }
            }
        }
        s
    }
}

/// Deterministic detector that replays a [`ReplayTable`].
#[derive(Debug, Clone)]
pub struct ReplayBackend {
    table: ReplayTable,
    default_delay: Duration,
}

impl ReplayBackend {
    pub fn new(table: ReplayTable) -> Self {
        Self { table, default_delay: Duration::ZERO }
    }

    pub fn load(path: &Path) -> Result<Self, ReplayFormatError> {
        ReplayTable::load(path).map(Self::new)
    }

    /// Synthetic inference time for frames without a latency column.
    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.default_delay = delay;
        self
    }

    pub fn table(&self) -> &ReplayTable {
        &self.table
    }

    /// Recorded detections for `frame`, scaled to its pixel size.
    pub fn lookup(&self, frame: &Frame) -> Vec<Detection> {
        let (w, h) = (frame.width as f64, frame.height as f64);
        self.table.frames.get(&frame.frame_id).map_or_else(Vec::new, |fr| {
            fr.boxes
                .iter()
                .map(|b| Detection { bbox: b.bbox.to_pixels(w, h), score: b.score, class_id: crate::geometry::CYCLIST_CLASS })
                .collect()
        })
    }
}

impl Detector for ReplayBackend {
    fn detect(&mut self, frame: &Frame) -> Result<DetectOutput, BackendError> {
        let start = Instant::now();
        let detections = self.lookup(frame);
        let delay = self
            .table
            .frames
            .get(&frame.frame_id)
            .and_then(|f| f.latency_ms)
            .map_or(self.default_delay, |ms| Duration::from_secs_f64(ms / 1e3));
        if !delay.is_zero() {
            precise_wait(start + delay);
        }
        Ok(DetectOutput { detections, latency: start.elapsed() })
    }

    fn name(&self) -> &str {
        "replay"
    }
}

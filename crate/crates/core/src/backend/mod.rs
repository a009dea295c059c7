//! Detector contract, the replay backend and the timing harness.

mod replay;
mod timing;

use std::time::{Duration, Instant};

use thiserror::Error;

pub use replay::{ReplayBackend, ReplayBox, ReplayFormatError, ReplayFrame, ReplayTable};
pub use timing::{measure, nearest_rank, LatencyStats, MeasurementError, TimingReport};

use crate::geometry::Detection;
use crate::raster::Raster;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    Unavailable(String),
}

/// One video frame. Replay streams carry no pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub frame_id: u64,
    /// monotonic nanoseconds
    pub timestamp_ns: u64,
    pub width: u32,
    pub height: u32,
    pub pixels: Option<Raster>,
}

impl Frame {
    pub fn new(frame_id: u64, timestamp_ns: u64, width: u32, height: u32) -> Self {
        Self { frame_id, timestamp_ns, width, height, pixels: None }
    }
}

/// Frames `0..count` at a fixed rate, timestamps derived from the frame id.
pub fn synthetic_stream(count: u64, frame_rate: f64, width: u32, height: u32) -> impl Iterator<Item = Frame> {
    (0..count).map(move |id| Frame::new(id, frame_timestamp_ns(id, frame_rate), width, height))
}

/// Timestamp of frame `id` at `frame_rate`, rounded to the nanosecond.
pub fn frame_timestamp_ns(id: u64, frame_rate: f64) -> u64 {
    (id as f64 * 1e9 / frame_rate).round() as u64
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectOutput {
    /// in the frame's pixel coordinates
    pub detections: Vec<Detection>,
    /// time spent in the backend's own work
    pub latency: Duration,
}

/// Frame in, detections out. Implementations are moved between threads but
/// never called concurrently.
pub trait Detector: Send {
    fn detect(&mut self, frame: &Frame) -> Result<DetectOutput, BackendError>;

    fn name(&self) -> &str {
        "detector"
    }
}

impl<D: Detector + ?Sized> Detector for Box<D> {
    fn detect(&mut self, frame: &Frame) -> Result<DetectOutput, BackendError> {
        (**self).detect(frame)
    }

    fn name(&self) -> &str {
        (**self).name()
    }
}

/// Opens a live camera adapter. No capture driver ships with this crate, so
/// this always reports the backend as unavailable.
pub fn open_live(adapter_id: &str) -> Result<Box<dyn Detector>, BackendError> {
    Err(BackendError::Unavailable(format!("live adapter {adapter_id:?} is not built into this binary")))
}

/// Sleeps most of the way to `deadline`, then spins for the rest.
pub(crate) fn precise_wait(deadline: Instant) {
    const SPIN: Duration = Duration::from_micros(1500);
    let now = Instant::now();
    if deadline > now + SPIN {
        std::thread::sleep(deadline - now - SPIN);
    }
    while Instant::now() < deadline {
        std::hint::spin_loop();
    }
}

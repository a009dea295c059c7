//! Latency percentiles and throughput.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use thiserror::Error;

use super::{BackendError, Detector, Frame};

#[derive(Debug, Error)]
pub enum MeasurementError {
    #[error("no frames left after discarding {warmup} warmup frame(s) of {total}")]
    Empty { warmup: usize, total: usize },
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// Nearest-rank percentile of an ascending slice: the value at rank
/// `ceil(p / 100 * n)`, clamped to `[1, n]`.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let n = sorted.len();
    let rank = ((p / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LatencyStats {
    pub samples: usize,
    pub p50_ms: f64,
    pub p95_ms: f64,
    pub p99_ms: f64,
    pub mean_ms: f64,
    pub max_ms: f64,
}

impl LatencyStats {
    pub fn from_millis(samples: &[f64]) -> Self {
        let mut v = samples.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        Self {
            samples: n,
            p50_ms: nearest_rank(&v, 50.0),
            p95_ms: nearest_rank(&v, 95.0),
            p99_ms: nearest_rank(&v, 99.0),
            mean_ms: if n == 0 { 0.0 } else { v.iter().sum::<f64>() / n as f64 },
            max_ms: v.last().copied().unwrap_or(0.0),
        }
    }

    pub fn from_durations(samples: &[Duration]) -> Self {
        Self::from_millis(&samples.iter().map(|d| d.as_secs_f64() * 1e3).collect::<Vec<_>>())
    }
}

/// Throughput and latency record for one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimingReport {
    pub frames_processed: usize,
    pub wall_time_s: f64,
    pub fps: f64,
    /// end-to-end per-frame latency
    pub latency: LatencyStats,
    pub per_stage: BTreeMap<String, LatencyStats>,
    /// end-to-end latency of every measured frame, in processing order
    pub per_frame_ms: Vec<f64>,
}

impl TimingReport {
    pub fn new(wall_time: Duration, per_frame: &[Duration], per_stage: BTreeMap<String, Vec<Duration>>) -> Self {
        // a zero wall time would make fps infinite; one nanosecond is the timer floor
        let wall_time_s = wall_time.max(Duration::from_nanos(1)).as_secs_f64();
        let frames_processed = per_frame.len();
        let per_frame_ms: Vec<f64> = per_frame.iter().map(|d| d.as_secs_f64() * 1e3).collect();
        Self {
            frames_processed,
            wall_time_s,
            fps: frames_processed as f64 / wall_time_s,
            latency: LatencyStats::from_millis(&per_frame_ms),
            per_stage: per_stage.into_iter().map(|(k, v)| (k, LatencyStats::from_durations(&v))).collect(),
            per_frame_ms,
        }
    }

    /// Checks the fps formula and percentile ordering for every statistic.
    pub fn check_consistency(&self) -> Result<(), String> {
        let expect = self.frames_processed as f64 / self.wall_time_s;
        if (self.fps - expect).abs() > 1e-9 * expect.abs().max(f64::MIN_POSITIVE) {
            return Err(format!("fps {} != frames/wall {}", self.fps, expect));
        }
        let ordered = |name: &str, s: &LatencyStats| {
            if s.p50_ms <= s.p95_ms && s.p95_ms <= s.p99_ms && s.p99_ms <= s.max_ms {
                Ok(())
            } else {
                Err(format!("{name}: percentiles out of order {s:?}"))
            }
        };
        ordered("latency", &self.latency)?;
        for (k, s) in &self.per_stage {
            ordered(k, s)?;
        }
        Ok(())
    }

    /// key=value report.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "frames_processed={}", self.frames_processed);
        let _ = writeln!(s, "wall_time_s={:.6}", self.wall_time_s);
        let _ = writeln!(s, "fps={:.3}", self.fps);
        write_stats(&mut s, "latency", &self.latency);
        for (k, v) in &self.per_stage {
            write_stats(&mut s, &format!("stage.{k}"), v);
        }
        s
    }

    pub fn per_frame_csv(&self) -> String {
        let mut s = String::from("frame_index,latency_ms\n");
        for (i, v) in self.per_frame_ms.iter().enumerate() {
            let _ = writeln!(s, "{i},{v:.6}");
        }
        s
    }
}

fn write_stats(s: &mut String, prefix: &str, st: &LatencyStats) {
    let _ = writeln!(s, "{prefix}.samples={}", st.samples);
    let _ = writeln!(s, "{prefix}.p50_ms={:.6}", st.p50_ms);
    let _ = writeln!(s, "{prefix}.p95_ms={:.6}", st.p95_ms);
    let _ = writeln!(s, "{prefix}.p99_ms={:.6}", st.p99_ms);
    let _ = writeln!(s, "{prefix}.mean_ms={:.6}", st.mean_ms);
    let _ = writeln!(s, "{prefix}.max_ms={:.6}", st.max_ms);
}

/// Runs every frame through `backend` on the calling thread and reports
/// statistics over the frames after the first `warmup`.
pub fn measure<D, I>(backend: &mut D, frames: I, warmup: usize) -> Result<TimingReport, MeasurementError>
where
    D: Detector + ?Sized,
    I: IntoIterator<Item = Frame>,
{
    let mut per_frame = Vec::new();
    let mut inference = Vec::new();
    let mut total = 0usize;
    let mut start: Option<Instant> = None;
    let mut end = Instant::now();
    for frame in frames {
        let t0 = Instant::now();
        let out = backend.detect(&frame)?;
        let t1 = Instant::now();
        if total >= warmup {
            start.get_or_insert(t0);
            per_frame.push(t1 - t0);
            inference.push(out.latency);
            end = t1;
        }
        total += 1;
    }
    let Some(start) = start else {
        return Err(MeasurementError::Empty { warmup, total });
    };
    let stages = BTreeMap::from([("inference".to_string(), inference)]);
    Ok(TimingReport::new(end - start, &per_frame, stages))
}

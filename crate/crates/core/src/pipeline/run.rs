//! Three-stage frame pipeline: ingest, detect and post-process, alert.
//!
//! Stages run on their own threads and hand frames forward by value over
//! bounded channels of depth [`QUEUE_DEPTH`]. A full queue blocks the
//! producer, so no frame is ever dropped and order is preserved.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::mpsc::{sync_channel, Receiver, SyncSender};
use std::thread;
use std::time::{Duration, Instant};

use super::config::PipelineConfig;
use crate::alert::{alert_step, in_zone, AlertEvent, AlertKind, AlertSink, AlertState, Zone};
use crate::backend::{frame_timestamp_ns, BackendError, Detector, Frame, TimingReport};
use crate::geometry::{filter_by_score, nms, Detection};

pub const QUEUE_DEPTH: usize = 4;

/// An alert event and the frame that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub frame_id: u64,
    pub event: AlertEvent,
}

/// Post-processed detections of one frame, in pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutput {
    pub frame_id: u64,
    pub timestamp_ns: u64,
    pub detections: Vec<Detection>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub frames: u64,
    pub detections_total: usize,
    pub alerts_raised: usize,
    pub alerts_cleared: usize,
    /// from the first frame with an in-zone detection to the first RAISED event
    pub first_alert_latency_s: Option<f64>,
    pub events: Vec<EventRecord>,
    pub outputs: Vec<FrameOutput>,
    pub timing: TimingReport,
    /// set when the backend failed before end of stream
    pub backend_failure: Option<BackendError>,
}

impl RunSummary {
    /// Deterministic key=value report. Timing is kept separate.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "frames={}", self.frames);
        let _ = writeln!(s, "detections_total={}", self.detections_total);
        let _ = writeln!(s, "alerts_raised={}", self.alerts_raised);
        let _ = writeln!(s, "alerts_cleared={}", self.alerts_cleared);
        match self.first_alert_latency_s {
            Some(v) => writeln!(s, "first_alert_latency_s={v:.9}"),
            None => writeln!(s, "first_alert_latency_s=none"),
        }
        .ok();
        match &self.backend_failure {
            Some(e) => writeln!(s, "backend_failure={e}"),
            None => writeln!(s, "backend_failure=none"),
        }
        .ok();
        s
    }

    /// One line per event: frame, time, kind, placement, detection snapshot.
    pub fn event_log(&self) -> String {
        let mut s = String::from("frame_id,timestamp_ns,kind,placement,detections\n");
        for r in &self.events {
            let e = &r.event;
            let dets: Vec<String> = e
                .detections
                .iter()
                .map(|d| format!("{} {} {} {} {}", d.bbox.x_min, d.bbox.y_min, d.bbox.x_max, d.bbox.y_max, d.score))
                .collect();
            let _ = writeln!(s, "{},{},{},{},{}", r.frame_id, e.timestamp_ns, e.kind, e.placement, dets.join(";"));
        }
        s
    }
}

struct Ingested {
    frame: Frame,
    entered: Instant,
}

struct Processed {
    frame_id: u64,
    timestamp_ns: u64,
    width: u32,
    height: u32,
    detections: Vec<Detection>,
    inference: Duration,
    postprocess: Duration,
    entered: Instant,
}

enum Stage2 {
    Frame(Processed),
    Failed(BackendError),
}

fn ingest(cfg: &PipelineConfig, frame_count: u64, tx: SyncSender<Ingested>) {
    for id in 0..frame_count {
        let frame = Frame::new(id, frame_timestamp_ns(id, cfg.frame_rate), cfg.frame_width, cfg.frame_height);
        if tx.send(Ingested { frame, entered: Instant::now() }).is_err() {
            // downstream stopped after a backend failure
            return;
        }
    }
}

fn detect<D: Detector>(cfg: &PipelineConfig, mut backend: D, rx: Receiver<Ingested>, tx: SyncSender<Stage2>) {
    for Ingested { frame, entered } in rx {
        let out = match backend.detect(&frame) {
            Ok(out) => out,
            Err(e) => {
                log::error!("backend {} failed on frame {}: {e}", backend.name(), frame.frame_id);
                let _ = tx.send(Stage2::Failed(e));
                return;
            }
        };
        let t = Instant::now();
        let detections = nms(&filter_by_score(&out.detections, cfg.score_threshold), cfg.nms_threshold);
        let msg = Processed {
            frame_id: frame.frame_id,
            timestamp_ns: frame.timestamp_ns,
            width: frame.width,
            height: frame.height,
            detections,
            inference: out.latency,
            postprocess: t.elapsed(),
            entered,
        };
        if tx.send(Stage2::Frame(msg)).is_err() {
            return;
        }
    }
}

/// Runs `frame_count` frames through `backend` and the alert machine.
pub fn run_stream<D: Detector>(
    cfg: &PipelineConfig,
    zone: &Zone,
    backend: D,
    frame_count: u64,
    sinks: &mut [Box<dyn AlertSink>],
) -> RunSummary {
    let (w, h) = (cfg.frame_width as f64, cfg.frame_height as f64);
    let params = cfg.debounce();
    let started = Instant::now();
    let (tx1, rx1) = sync_channel::<Ingested>(QUEUE_DEPTH);
    let (tx2, rx2) = sync_channel::<Stage2>(QUEUE_DEPTH);

    let mut state = AlertState::default();
    let mut events = Vec::new();
    let mut outputs = Vec::new();
    let mut backend_failure = None;
    let mut first_hit_ns = None;
    let mut first_raise_ns = None;
    let mut per_frame = Vec::new();
    let mut stages: BTreeMap<String, Vec<Duration>> =
        ["inference", "postprocess", "alert", "overhead"].into_iter().map(|k| (k.to_string(), Vec::new())).collect();
    let mut finished = started;

    thread::scope(|scope| {
        scope.spawn(|| ingest(cfg, frame_count, tx1));
        scope.spawn(|| detect(cfg, backend, rx1, tx2));
        for msg in rx2 {
            let p = match msg {
                Stage2::Frame(p) => p,
                Stage2::Failed(e) => {
                    backend_failure = Some(e);
                    break;
                }
            };
            let t = Instant::now();
            debug_assert_eq!((p.width, p.height), (cfg.frame_width, cfg.frame_height));
            let normalized: Vec<Detection> =
                p.detections.iter().map(|d| Detection { bbox: d.bbox.to_normalized(w, h), ..*d }).collect();
            if first_hit_ns.is_none() && normalized.iter().any(|d| in_zone(d, zone)) {
                first_hit_ns = Some(p.timestamp_ns);
            }
            // frames arrive in ingest order with synthetic non-decreasing timestamps
            let (next, evs) = alert_step(&state, &normalized, zone, p.timestamp_ns, params)
                .expect("ingest produces non-decreasing timestamps");
            state = next;
            for event in evs {
                if event.kind == AlertKind::Raised && first_raise_ns.is_none() {
                    first_raise_ns = Some(event.timestamp_ns);
                }
                for sink in sinks.iter_mut() {
                    sink.on_event(&event);
                }
                events.push(EventRecord { frame_id: p.frame_id, event });
            }
            outputs.push(FrameOutput { frame_id: p.frame_id, timestamp_ns: p.timestamp_ns, detections: p.detections });
            finished = Instant::now();
            let total = finished - p.entered;
            stages.get_mut("inference").unwrap().push(p.inference);
            stages.get_mut("postprocess").unwrap().push(p.postprocess);
            stages.get_mut("alert").unwrap().push(finished - t);
            stages.get_mut("overhead").unwrap().push(total.saturating_sub(p.inference));
            per_frame.push(total);
        }
        // dropping the receiver unblocks the upstream stages after a failure
    });

    let count = |k: AlertKind| events.iter().filter(|r| r.event.kind == k).count();
    let first_alert_latency_s = match (first_hit_ns, first_raise_ns) {
        (Some(hit), Some(raise)) => Some(raise.saturating_sub(hit) as f64 / 1e9),
        _ => None,
    };
    RunSummary {
        frames: outputs.len() as u64,
        detections_total: outputs.iter().map(|o| o.detections.len()).sum(),
        alerts_raised: count(AlertKind::Raised),
        alerts_cleared: count(AlertKind::Cleared),
        first_alert_latency_s,
        events,
        timing: TimingReport::new(finished - started, &per_frame, stages),
        outputs,
        backend_failure,
    }
}

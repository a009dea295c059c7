//! Alert consumers. Audio playback lives outside this crate; the command
//! hook hands RAISED events to whatever program the host provides.

use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::SyncSender;
use std::sync::Arc;

use super::state::{AlertEvent, AlertKind};

pub trait AlertSink: Send {
    fn on_event(&mut self, event: &AlertEvent);
}

/// Writes each event to the `log` facade.
#[derive(Debug, Default)]
pub struct LogSink;

impl AlertSink for LogSink {
    fn on_event(&mut self, e: &AlertEvent) {
        log::warn!("{} placement={} t_ns={} detections={}", e.kind, e.placement, e.timestamp_ns, e.detections.len());
    }
}

/// Spawns `program args..` on every RAISED event without waiting for it.
#[derive(Debug)]
pub struct CommandSink {
    program: String,
    args: Vec<String>,
}

impl CommandSink {
    /// Splits `command_line` on whitespace; `None` if it is blank.
    pub fn parse(command_line: &str) -> Option<Self> {
        let mut parts = command_line.split_whitespace().map(String::from);
        let program = parts.next()?;
        Some(Self { program, args: parts.collect() })
    }
}

impl AlertSink for CommandSink {
    fn on_event(&mut self, e: &AlertEvent) {
        if e.kind != AlertKind::Raised {
            return;
        }
        let spawned = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn();
        if let Err(err) = spawned {
            log::error!("alert command {:?} failed to start: {err}", self.program);
        }
    }
}

/// Shared flag a display can poll: set while an alert is raised.
#[derive(Debug, Clone, Default)]
pub struct OverlayFlag(Arc<AtomicBool>);

impl OverlayFlag {
    pub fn is_raised(&self) -> bool {
        self.0.load(Ordering::Acquire)
    }
}

impl AlertSink for OverlayFlag {
    fn on_event(&mut self, e: &AlertEvent) {
        self.0.store(e.kind == AlertKind::Raised, Ordering::Release);
    }
}

/// Forwards events over a bounded channel. A dropped receiver is ignored.
#[derive(Debug)]
pub struct ChannelSink(pub SyncSender<AlertEvent>);

impl AlertSink for ChannelSink {
    fn on_event(&mut self, e: &AlertEvent) {
        let _ = self.0.send(e.clone());
    }
}

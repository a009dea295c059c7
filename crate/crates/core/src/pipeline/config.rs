use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::alert::{zone_for_placement, DebounceParams, Placement, Zone};
use crate::config::{require_positive, require_unit, ConfigError};

/// Where frames come from.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    /// recorded detections file
    Replay(PathBuf),
    /// camera adapter id
    Live(String),
}

/// Pipeline settings, read from TOML. Every field has a default.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub source: Option<Source>,
    pub score_threshold: f64,
    pub nms_threshold: f64,
    pub placement: Placement,
    /// replaces the placement's preset polygon, normalized coordinates
    pub zone: Option<Vec<[f64; 2]>>,
    pub k_on: u32,
    pub k_off: u32,
    pub frame_rate: f64,
    pub frame_width: u32,
    pub frame_height: u32,
    /// synthetic inference time for replay frames without a latency column
    pub replay_delay_ms: f64,
    /// program started on every RAISED event
    pub sound_command: Option<String>,
    pub report_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            source: None,
            score_threshold: 0.5,
            nms_threshold: 0.5,
            placement: Placement::FrontMirror,
            zone: None,
            k_on: 3,
            k_off: 5,
            frame_rate: 30.0,
            frame_width: 640,
            frame_height: 480,
            replay_delay_ms: 0.0,
            sound_command: None,
            report_dir: None,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let cfg: Self = crate::config::load_toml(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn debounce(&self) -> DebounceParams {
        DebounceParams { k_on: self.k_on, k_off: self.k_off }
    }

    /// The preset zone for the placement, or the configured override.
    pub fn zone(&self) -> Result<Zone, ConfigError> {
        let custom: Option<Vec<(f64, f64)>> = self.zone.as_ref().map(|v| v.iter().map(|&[x, y]| (x, y)).collect());
        zone_for_placement(self.placement, custom.as_deref())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        require_unit("score_threshold", self.score_threshold)?;
        require_unit("nms_threshold", self.nms_threshold)?;
        require_positive("frame_rate", self.frame_rate)?;
        self.debounce().validate(self.frame_rate)?;
        if self.frame_width == 0 || self.frame_height == 0 {
            return Err(ConfigError::invalid("frame_width", "frame dimensions must be positive"));
        }
        if !(self.replay_delay_ms.is_finite() && self.replay_delay_ms >= 0.0) {
            return Err(ConfigError::invalid("replay_delay_ms", format!("must be non-negative, got {}", self.replay_delay_ms)));
        }
        self.zone()?;
        Ok(())
    }
}

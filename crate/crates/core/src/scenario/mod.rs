//! Synthetic right-hook test: a cyclist riding a straight line past a
//! stationary truck, seen by pinhole cameras at the three placements.

mod camera;

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

pub use camera::{clip_to_near, clip_to_unit_square, convex_hull, Camera, Point3};

use crate::alert::Placement;
use crate::backend::{frame_timestamp_ns, ReplayTable};
use crate::config::{require_positive, require_unit, ConfigError};
use crate::dataset::{write_voc_dir, ImageAnnotation};
use crate::geometry::BoundingBox;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerPlacement {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl PerPlacement {
    pub fn get(&self, p: Placement) -> f64 {
        match p {
            Placement::FrontMirror => self.a,
            Placement::Above => self.b,
            Placement::Rear => self.c,
        }
    }
}

/// Perturbations applied when exporting a track as replay detections.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    /// uniform per-coordinate jitter bound, pixels
    pub jitter_px: f64,
    /// probability of dropping a frame's detection
    pub drop_rate: f64,
    /// scores are drawn uniformly from `[score_min, score_max]`
    pub score_min: f64,
    pub score_max: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::NONE
    }
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel { jitter_px: 0.0, drop_rate: 0.0, score_min: 1.0, score_max: 1.0 };

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.jitter_px.is_finite() && self.jitter_px >= 0.0) {
            return Err(ConfigError::invalid("noise.jitter_px", format!("must be non-negative, got {}", self.jitter_px)));
        }
        require_unit("noise.drop_rate", self.drop_rate)?;
        require_unit("noise.score_min", self.score_min)?;
        require_unit("noise.score_max", self.score_max)?;
        if self.score_min > self.score_max {
            return Err(ConfigError::invalid("noise.score_min", "exceeds score_max"));
        }
        Ok(())
    }
}

/// Scenario geometry in feet, seconds and pixels.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub truck_length: f64,
    pub truck_height: f64,
    pub camera_heights: PerPlacement,
    /// downward tilt of each camera's optical axis
    pub camera_pitch_deg: PerPlacement,
    pub cyclist_speed: f64,
    /// distance from the truck's right side to the cyclist's center line
    pub cyclist_lateral_offset: f64,
    pub cyclist_height: f64,
    pub cyclist_width: f64,
    /// cyclist position along the truck at t = 0; the truck spans `[0, truck_length]`
    pub cyclist_start_x: f64,
    pub frame_rate: f64,
    pub duration: f64,
    pub hfov_deg: f64,
    pub image_width: u32,
    pub image_height: u32,
    /// boxes narrower or shorter than this after clipping count as not visible
    pub min_visible_px: f64,
    /// lateral extent of the lane band used for zone presets, measured from the truck side
    pub lane_band: [f64; 2],
    pub noise: NoiseModel,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            truck_length: 80.0,
            truck_height: 13.0,
            camera_heights: PerPlacement { a: 5.0, b: 13.0, c: 13.0 },
            camera_pitch_deg: PerPlacement { a: 15.0, b: 45.0, c: 20.0 },
            cyclist_speed: 15.0,
            cyclist_lateral_offset: 6.0,
            cyclist_height: 6.0,
            cyclist_width: 2.0,
            cyclist_start_x: -20.0,
            frame_rate: 30.0,
            duration: 8.0,
            hfov_deg: 60.0,
            image_width: 640,
            image_height: 480,
            min_visible_px: 16.0,
            lane_band: [2.0, 10.0],
            noise: NoiseModel::NONE,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let cfg: Self = crate::config::load_toml(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("truck_length", self.truck_length),
            ("truck_height", self.truck_height),
            ("camera_heights.A", self.camera_heights.a),
            ("camera_heights.B", self.camera_heights.b),
            ("camera_heights.C", self.camera_heights.c),
            ("cyclist_speed", self.cyclist_speed),
            ("cyclist_lateral_offset", self.cyclist_lateral_offset),
            ("cyclist_height", self.cyclist_height),
            ("cyclist_width", self.cyclist_width),
            ("frame_rate", self.frame_rate),
            ("duration", self.duration),
            ("min_visible_px", self.min_visible_px),
        ] {
            require_positive(name, v)?;
        }
        if !(self.hfov_deg > 0.0 && self.hfov_deg < 180.0) {
            return Err(ConfigError::invalid("hfov_deg", format!("must lie in (0, 180), got {}", self.hfov_deg)));
        }
        if self.image_width == 0 || self.image_height == 0 {
            return Err(ConfigError::invalid("image_width", "image dimensions must be positive"));
        }
        for (name, v) in [
            ("camera_pitch_deg.A", self.camera_pitch_deg.a),
            ("camera_pitch_deg.B", self.camera_pitch_deg.b),
            ("camera_pitch_deg.C", self.camera_pitch_deg.c),
        ] {
            if !(-90.0..=90.0).contains(&v) {
                return Err(ConfigError::invalid(name, format!("must lie in [-90, 90], got {v}")));
            }
        }
        if !self.cyclist_start_x.is_finite() {
            return Err(ConfigError::invalid("cyclist_start_x", "must be finite"));
        }
        let [near, far] = self.lane_band;
        if !(near.is_finite() && far.is_finite() && 0.0 <= near && near < far) {
            return Err(ConfigError::invalid("lane_band", format!("need 0 <= near < far, got {near}, {far}")));
        }
        self.noise.validate()
    }

    pub fn frame_count(&self) -> u64 {
        (self.duration * self.frame_rate).round() as u64
    }

    /// Mounting position and orientation of a placement's camera. A sits on
    /// the front mirror looking back along the right side, B on the roof edge
    /// mid-truck looking forward and down, C at the rear corner looking forward.
    pub fn camera(&self, p: Placement) -> Camera {
        let (x, y, yaw) = match p {
            Placement::FrontMirror => (self.truck_length, -1.0, 180.0),
            Placement::Above => (self.truck_length / 2.0, -3.0, 0.0),
            Placement::Rear => (0.0, -1.0, 0.0),
        };
        Camera::new(
            [x, y, self.camera_heights.get(p)],
            yaw,
            self.camera_pitch_deg.get(p),
            self.hfov_deg,
            self.image_width,
            self.image_height,
        )
    }

    /// Cyclist rectangle corners at along-truck position `x`.
    pub fn cyclist_corners(&self, x: f64) -> [Point3; 4] {
        let yc = -self.cyclist_lateral_offset;
        let (y0, y1) = (yc - self.cyclist_width / 2.0, yc + self.cyclist_width / 2.0);
        let h = self.cyclist_height;
        [[x, y0, 0.0], [x, y1, 0.0], [x, y1, h], [x, y0, h]]
    }

    pub fn cyclist_x(&self, frame: u64) -> f64 {
        self.cyclist_start_x + self.cyclist_speed * frame as f64 / self.frame_rate
    }
}

/// Ground-truth cyclist boxes per frame and camera.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticTrack {
    pub frame_rate: f64,
    pub image_width: u32,
    pub image_height: u32,
    pub cyclist_x: Vec<f64>,
    /// normalized boxes; `None` where the cyclist is not visible
    pub views: BTreeMap<Placement, Vec<Option<BoundingBox>>>,
}

impl SyntheticTrack {
    pub fn frame_count(&self) -> u64 {
        self.cyclist_x.len() as u64
    }

    pub fn view(&self, p: Placement) -> &[Option<BoundingBox>] {
        &self.views[&p]
    }

    pub fn timestamp_ns(&self, frame: u64) -> u64 {
        frame_timestamp_ns(frame, self.frame_rate)
    }

    /// One annotation per frame, pixel boxes, ids `frame_000123`.
    pub fn annotations(&self, p: Placement) -> Vec<ImageAnnotation> {
        let (w, h) = (self.image_width as f64, self.image_height as f64);
        self.view(p)
            .iter()
            .enumerate()
            .map(|(i, b)| {
                ImageAnnotation::new(
                    frame_image_id(i as u64),
                    self.image_width,
                    self.image_height,
                    b.iter().map(|b| b.to_pixels(w, h)).collect(),
                )
            })
            .collect()
    }

    /// Writes the ground truth of one camera as a VOC directory.
    pub fn write_voc(&self, p: Placement, dir: &Path) -> std::io::Result<()> {
        write_voc_dir(dir, &self.annotations(p))
    }
}

pub fn frame_image_id(frame: u64) -> String {
    format!("frame_{frame:06}")
}

/// Visible, clipped pixel box of the cyclist at `x` for `cam`.
pub fn project_cyclist(cfg: &ScenarioConfig, cam: &Camera, x: f64) -> Option<BoundingBox> {
    let raw = cam.project_hull_box(&cfg.cyclist_corners(x))?;
    let clipped = BoundingBox {
        x_min: raw.x_min.clamp(0.0, cam.width as f64),
        y_min: raw.y_min.clamp(0.0, cam.height as f64),
        x_max: raw.x_max.clamp(0.0, cam.width as f64),
        y_max: raw.y_max.clamp(0.0, cam.height as f64),
    };
    (clipped.width() >= cfg.min_visible_px && clipped.height() >= cfg.min_visible_px).then_some(clipped)
}

pub fn generate_track(cfg: &ScenarioConfig) -> Result<SyntheticTrack, ConfigError> {
    cfg.validate()?;
    let n = cfg.frame_count();
    let cyclist_x: Vec<f64> = (0..n).map(|i| cfg.cyclist_x(i)).collect();
    let (w, h) = (cfg.image_width as f64, cfg.image_height as f64);
    let views = Placement::ALL
        .into_iter()
        .map(|p| {
            let cam = cfg.camera(p);
            let boxes = cyclist_x.iter().map(|&x| project_cyclist(cfg, &cam, x).map(|b| b.to_normalized(w, h))).collect();
            (p, boxes)
        })
        .collect();
    Ok(SyntheticTrack {
        frame_rate: cfg.frame_rate,
        image_width: cfg.image_width,
        image_height: cfg.image_height,
        cyclist_x,
        views,
    })
}

/// Replay table for one camera of `track`. Every frame consumes the same
/// number of random draws, so a frame's noise does not depend on earlier drops.
pub fn export_replay(track: &SyntheticTrack, p: Placement, noise: &NoiseModel, seed: u64) -> ReplayTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (track.image_width as f64, track.image_height as f64);
    let mut table = ReplayTable { frame_count: Some(track.frame_count()), ..ReplayTable::default() };
    for (i, truth) in track.view(p).iter().enumerate() {
        let drop: f64 = rng.random();
        let mut jitter = [0.0; 4];
        for j in &mut jitter {
            *j = (rng.random::<f64>() * 2.0 - 1.0) * noise.jitter_px;
        }
        let u: f64 = rng.random();
        let Some(b) = truth else { continue };
        if drop < noise.drop_rate {
            continue;
        }
        let bbox = if noise.jitter_px == 0.0 {
            *b
        } else {
            let px = b.to_pixels(w, h);
            let xs = [(px.x_min + jitter[0]).clamp(0.0, w), (px.x_max + jitter[2]).clamp(0.0, w)];
            let ys = [(px.y_min + jitter[1]).clamp(0.0, h), (px.y_max + jitter[3]).clamp(0.0, h)];
            BoundingBox { x_min: xs[0].min(xs[1]), y_min: ys[0].min(ys[1]), x_max: xs[0].max(xs[1]), y_max: ys[0].max(ys[1]) }
                .to_normalized(w, h)
        };
        let score = noise.score_min + u * (noise.score_max - noise.score_min);
        table.push(i as u64, bbox, score);
    }
    table
}

/// Blind-zone polygon for `p`: the lane band beside the truck over its full
/// length, clipped to the near plane, projected, clipped to the frame and
/// convex-hulled.
pub fn derive_zone(cfg: &ScenarioConfig, p: Placement) -> Vec<(f64, f64)> {
    let cam = cfg.camera(p);
    let [near, far] = cfg.lane_band;
    let band: [Point3; 4] =
        [[0.0, -near, 0.0], [cfg.truck_length, -near, 0.0], [cfg.truck_length, -far, 0.0], [0.0, -far, 0.0]];
    let (w, h) = (cfg.image_width as f64, cfg.image_height as f64);
    let projected: Vec<(f64, f64)> = clip_to_near(&cam, &band)
        .into_iter()
        .map(|q| {
            let (u, v) = cam.image_of(cam.to_camera(q));
            (u / w, v / h)
        })
        .collect();
    convex_hull(&clip_to_unit_square(&projected))
}

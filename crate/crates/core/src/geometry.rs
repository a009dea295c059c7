//! Box geometry shared by every stage: IoU, score filtering and greedy NMS.
//!
//! Boxes are continuous real rectangles. There is no `+1` pixel widening,
//! so a box `[0, 0, 10, 10]` has area 100 whether it is in pixel or
//! normalized space.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Class id of the only in-scope object class.
pub const CYCLIST_CLASS: u32 = 0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("box corners are not finite: [{0}, {1}, {2}, {3}]")]
    NonFinite(f64, f64, f64, f64),
    #[error("box corners are inverted: [{0}, {1}, {2}, {3}]")]
    Inverted(f64, f64, f64, f64),
    #[error("score {0} outside [0, 1]")]
    Score(f64),
}

/// Axis-aligned rectangle `[x_min, y_min, x_max, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundingBox {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl BoundingBox {
    /// Checked constructor. Zero-area boxes are accepted.
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self, GeometryError> {
        if !(x_min.is_finite() && y_min.is_finite() && x_max.is_finite() && y_max.is_finite()) {
            return Err(GeometryError::NonFinite(x_min, y_min, x_max, y_max));
        }
        if x_min > x_max || y_min > y_max {
            return Err(GeometryError::Inverted(x_min, y_min, x_max, y_max));
        }
        Ok(Self { x_min, y_min, x_max, y_max })
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))
    }

    /// Midpoint of the lower edge (largest y in image coordinates).
    pub fn bottom_center(&self) -> (f64, f64) {
        (0.5 * (self.x_min + self.x_max), self.y_max)
    }

    /// Overlap rectangle, or `None` when the boxes do not touch.
    pub fn intersection(&self, other: &BoundingBox) -> Option<BoundingBox> {
        let x_min = self.x_min.max(other.x_min);
        let y_min = self.y_min.max(other.y_min);
        let x_max = self.x_max.min(other.x_max);
        let y_max = self.y_max.min(other.y_max);
        (x_min <= x_max && y_min <= y_max).then_some(BoundingBox { x_min, y_min, x_max, y_max })
    }

    /// Clamp every corner into `[0, width] x [0, height]`.
    pub fn clip(&self, width: f64, height: f64) -> BoundingBox {
        BoundingBox {
            x_min: self.x_min.clamp(0.0, width),
            y_min: self.y_min.clamp(0.0, height),
            x_max: self.x_max.clamp(0.0, width),
            y_max: self.y_max.clamp(0.0, height),
        }
    }

    /// Pixel box to `[0, 1]` coordinates for a `width x height` image.
    pub fn to_normalized(&self, width: f64, height: f64) -> BoundingBox {
        BoundingBox {
            x_min: self.x_min / width,
            y_min: self.y_min / height,
            x_max: self.x_max / width,
            y_max: self.y_max / height,
        }
    }

    /// Normalized box to pixels for a `width x height` image.
    pub fn to_pixels(&self, width: f64, height: f64) -> BoundingBox {
        BoundingBox {
            x_min: self.x_min * width,
            y_min: self.y_min * height,
            x_max: self.x_max * width,
            y_max: self.y_max * height,
        }
    }
}

impl fmt::Display for BoundingBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.x_min, self.y_min, self.x_max, self.y_max)
    }
}

/// A scored box produced by a detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub bbox: BoundingBox,
    pub score: f64,
    pub class_id: u32,
}

impl Detection {
    pub fn new(bbox: BoundingBox, score: f64) -> Result<Self, GeometryError> {
        if !(0.0..=1.0).contains(&score) {
            return Err(GeometryError::Score(score));
        }
        Ok(Self { bbox, score, class_id: CYCLIST_CLASS })
    }
}

/// Intersection over union. Two boxes whose union has zero area score 0.
pub fn iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let inter = a.intersection(b).map_or(0.0, |r| r.area());
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        (inter / union).clamp(0.0, 1.0)
    }
}

/// Keeps detections with `score >= min_score`, preserving order.
pub fn filter_by_score(dets: &[Detection], min_score: f64) -> Vec<Detection> {
    dets.iter().filter(|d| d.score >= min_score).copied().collect()
}

/// Indices of `dets` sorted by descending score, equal scores by index.
pub(crate) fn score_order(dets: &[Detection]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    // stable sort keeps the lower input index first among equal scores
    order.sort_by(|&i, &j| dets[j].score.partial_cmp(&dets[i].score).unwrap_or(Ordering::Equal));
    order
}

/// Greedy non-maximum suppression.
///
/// A detection survives iff its IoU with every previously kept detection
/// is strictly below `iou_threshold`. Output is in descending score order.
pub fn nms(dets: &[Detection], iou_threshold: f64) -> Vec<Detection> {
    let mut kept: Vec<Detection> = Vec::with_capacity(dets.len());
    for i in score_order(dets) {
        let cand = &dets[i];
        if kept.iter().all(|k| iou(&k.bbox, &cand.bbox) < iou_threshold) {
            kept.push(*cand);
        }
    }
    kept
}

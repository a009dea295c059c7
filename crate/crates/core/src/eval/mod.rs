//! COCO-style detection metrics for the single cyclist class.
//!
//! Greedy score-ordered matching, 101-point interpolated AP, and mAP
//! averaged over IoU thresholds 0.50:0.05:0.95.

mod coco;
mod curve;
mod matching;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

pub use coco::{coco_map, coco_map_with, ImageEval, MetricsBundle, ThresholdMetrics, COCO_IOU_THRESHOLDS};
pub use curve::{average_precision, pr_curve, PrCurve, PrPoint, RECALL_SAMPLES};
pub use matching::{match_detections, MatchResult};

use crate::dataset::ImageAnnotation;
use crate::geometry::{BoundingBox, Detection};

#[derive(Debug, Error)]
pub enum DetectionFileError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: detection for unknown image {image_id:?}")]
    UnknownImage { line: usize, image_id: String },
}

/// One record of a detections file.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRecord {
    pub image_id: String,
    pub detection: Detection,
}

/// Parses `image_id, x_min, y_min, x_max, y_max, score` lines. Blank lines
/// and lines starting with `#` are ignored.
pub fn parse_detections(text: &str) -> Result<Vec<DetectionRecord>, DetectionFileError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = s.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(DetectionFileError::Format { line, message: format!("expected 6 fields, got {}", fields.len()) });
        }
        let mut nums = [0f64; 5];
        for (slot, f) in nums.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|_| DetectionFileError::Format { line, message: format!("not a number: {f:?}") })?;
        }
        let bbox = BoundingBox::new(nums[0], nums[1], nums[2], nums[3])
            .map_err(|e| DetectionFileError::Format { line, message: e.to_string() })?;
        let detection =
            Detection::new(bbox, nums[4]).map_err(|e| DetectionFileError::Format { line, message: e.to_string() })?;
        out.push(DetectionRecord { image_id: fields[0].to_string(), detection });
    }
    Ok(out)
}

pub fn format_detections(records: &[DetectionRecord]) -> String {
    let mut s = String::from("# image_id, x_min, y_min, x_max, y_max, score\n");
    for r in records {
        let b = &r.detection.bbox;
        let _ = writeln!(s, "{},{},{},{},{},{}", r.image_id, b.x_min, b.y_min, b.x_max, b.y_max, r.detection.score);
    }
    s
}

/// Joins ground truth with detection records by image id. Every ground-truth
/// image is included; detections naming an unknown image are an error.
pub fn join_detections(
    ground_truth: &[ImageAnnotation],
    records: &[DetectionRecord],
) -> Result<Vec<ImageEval>, DetectionFileError> {
    let mut by_id: BTreeMap<&str, usize> = BTreeMap::new();
    let mut images: Vec<ImageEval> = ground_truth
        .iter()
        .enumerate()
        .map(|(i, a)| {
            by_id.insert(a.image_id.as_str(), i);
            ImageEval { image_id: a.image_id.clone(), detections: Vec::new(), ground_truth: a.boxes.clone() }
        })
        .collect();
    for (n, r) in records.iter().enumerate() {
        let idx = *by_id
            .get(r.image_id.as_str())
            .ok_or_else(|| DetectionFileError::UnknownImage { line: n + 1, image_id: r.image_id.clone() })?;
        images[idx].detections.push(r.detection);
    }
    Ok(images)
}

impl MetricsBundle {
    /// key=value report.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "images={}", self.image_count);
        let _ = writeln!(s, "ground_truths={}", self.ground_truth_count);
        let _ = writeln!(s, "detections={}", self.detection_count);
        let _ = writeln!(s, "empty_dataset={}", self.empty_dataset);
        let _ = writeln!(s, "empty_detections={}", self.empty_detections);
        let _ = writeln!(s, "map_coco={}", self.map_coco);
        let _ = writeln!(s, "ap50={}", self.ap50);
        let _ = writeln!(s, "ap75={}", self.ap75);
        for t in &self.per_threshold {
            let _ = writeln!(s, "ap@{:.2}={}", t.iou_threshold, t.ap);
        }
        for t in &self.per_threshold {
            let _ = writeln!(s, "tp@{:.2}={}", t.iou_threshold, t.true_positives);
            let _ = writeln!(s, "fp@{:.2}={}", t.iou_threshold, t.false_positives);
        }
        s
    }

    /// `(file name, csv)` per threshold, e.g. `pr_0.50.csv`.
    pub fn pr_curve_csvs(&self) -> Vec<(String, String)> {
        self.per_threshold
            .iter()
            .map(|t| (format!("pr_{:.2}.csv", t.iou_threshold), t.curve.to_csv()))
            .collect()
    }
}

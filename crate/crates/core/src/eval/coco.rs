use std::cmp::Ordering;

use super::curve::{average_precision, pr_curve, PrCurve};
use super::matching::match_detections;
use crate::geometry::{BoundingBox, Detection};
use crate::par::{self, Execution};

/// IoU thresholds 0.50:0.05:0.95.
pub const COCO_IOU_THRESHOLDS: [f64; 10] = [0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95];

/// Detections and ground truth for one image, in one coordinate space.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ImageEval {
    pub image_id: String,
    pub detections: Vec<Detection>,
    pub ground_truth: Vec<BoundingBox>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdMetrics {
    pub iou_threshold: f64,
    pub ap: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub curve: PrCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsBundle {
    /// one entry per threshold in [`COCO_IOU_THRESHOLDS`] order
    pub per_threshold: Vec<ThresholdMetrics>,
    pub map_coco: f64,
    pub ap50: f64,
    pub ap75: f64,
    pub image_count: usize,
    pub detection_count: usize,
    pub ground_truth_count: usize,
    pub empty_dataset: bool,
    pub empty_detections: bool,
}

impl MetricsBundle {
    pub fn ap_at(&self, iou_threshold: f64) -> Option<f64> {
        self.per_threshold.iter().find(|t| t.iou_threshold == iou_threshold).map(|t| t.ap)
    }
}

/// COCO-style single-class evaluation over a set of images.
pub fn coco_map(images: &[ImageEval]) -> MetricsBundle {
    coco_map_with(Execution::default(), images)
}

/// Same as [`coco_map`], with an explicit execution mode. Thresholds and
/// images are matched in parallel; pooling and AP are ordered folds, so the
/// result is bit-identical in either mode.
pub fn coco_map_with(exec: Execution, images: &[ImageEval]) -> MetricsBundle {
    let ground_truth_count: usize = images.iter().map(|i| i.ground_truth.len()).sum();
    let detection_count: usize = images.iter().map(|i| i.detections.len()).sum();

    // pooled order: score desc, then image id, then detection index
    let mut pool: Vec<(usize, usize)> =
        images.iter().enumerate().flat_map(|(i, im)| (0..im.detections.len()).map(move |d| (i, d))).collect();
    pool.sort_by(|&(ia, da), &(ib, db)| {
        let (sa, sb) = (images[ia].detections[da].score, images[ib].detections[db].score);
        sb.partial_cmp(&sa)
            .unwrap_or(Ordering::Equal)
            .then_with(|| images[ia].image_id.cmp(&images[ib].image_id))
            .then(ia.cmp(&ib))
            .then(da.cmp(&db))
    });

    let per_threshold = par::map_slice(exec, &COCO_IOU_THRESHOLDS, |_, &thr| {
        let matched = par::map_slice(exec, images, |_, im| match_detections(&im.detections, &im.ground_truth, thr));
        let flags: Vec<bool> = pool.iter().map(|&(i, d)| matched[i].is_tp(d)).collect();
        let curve = pr_curve(&flags, ground_truth_count);
        let ap = if ground_truth_count == 0 { 0.0 } else { average_precision(&curve) };
        let tp = flags.iter().filter(|&&f| f).count();
        ThresholdMetrics { iou_threshold: thr, ap, true_positives: tp, false_positives: flags.len() - tp, curve }
    });

    let map_coco = per_threshold.iter().map(|t| t.ap).sum::<f64>() / per_threshold.len() as f64;
    MetricsBundle {
        map_coco,
        ap50: per_threshold[0].ap,
        ap75: per_threshold[5].ap,
        per_threshold,
        image_count: images.len(),
        detection_count,
        ground_truth_count,
        empty_dataset: images.is_empty(),
        empty_detections: detection_count == 0,
    }
}

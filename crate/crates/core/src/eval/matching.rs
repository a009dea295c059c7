use crate::geometry::{iou, score_order, BoundingBox, Detection};

/// Outcome of matching one image's detections at one IoU threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    /// Per detection, in input order: the matched ground-truth index for a
    /// true positive, `None` for a false positive.
    pub matches: Vec<Option<usize>>,
    pub num_gt: usize,
}

impl MatchResult {
    pub fn is_tp(&self, det: usize) -> bool {
        self.matches[det].is_some()
    }

    pub fn true_positives(&self) -> usize {
        self.matches.iter().filter(|m| m.is_some()).count()
    }

    pub fn false_positives(&self) -> usize {
        self.matches.len() - self.true_positives()
    }

    pub fn false_negatives(&self) -> usize {
        self.num_gt - self.true_positives()
    }
}

/// Greedy matching: detections in descending score order (ties by index)
/// each claim the still-unmatched ground truth with the highest IoU (ties by
/// lower gt index) when that IoU reaches `iou_threshold`.
pub fn match_detections(dets: &[Detection], gts: &[BoundingBox], iou_threshold: f64) -> MatchResult {
    let mut taken = vec![false; gts.len()];
    let mut matches = vec![None; dets.len()];
    for d in score_order(dets) {
        let mut best: Option<(usize, f64)> = None;
        for (g, gt) in gts.iter().enumerate() {
            if taken[g] {
                continue;
            }
            let v = iou(&dets[d].bbox, gt);
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((g, v));
            }
        }
        if let Some((g, v)) = best {
            if v >= iou_threshold {
                taken[g] = true;
                matches[d] = Some(g);
            }
        }
    }
    MatchResult { matches, num_gt: gts.len() }
}

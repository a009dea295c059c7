//! Reference implementations used only by tests. Each is written from the
//! definitions, not from the library code.

#![allow(dead_code)]

use blindspot::geometry::{BoundingBox, Detection};

/// Lattice spacing of the rasterization oracle.
pub const GRID: f64 = 1e-6;

/// Grid points `k * GRID` (cell centers at `(k + 0.5) * GRID`) inside `[a, b)`.
fn lattice_count(a: f64, b: f64) -> i64 {
    if b <= a {
        return 0;
    }
    let first = (a / GRID - 0.5).ceil() as i64;
    let last = (b / GRID - 0.5).ceil() as i64;
    (last - first).max(0)
}

fn raster_area(x0: f64, y0: f64, x1: f64, y1: f64) -> i64 {
    lattice_count(x0, x1) * lattice_count(y0, y1)
}

/// IoU by counting covered cell centers on a fine grid.
pub fn raster_iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let inter = raster_area(a.x_min.max(b.x_min), a.y_min.max(b.y_min), a.x_max.min(b.x_max), a.y_max.min(b.y_max));
    let union = raster_area(a.x_min, a.y_min, a.x_max, a.y_max) + raster_area(b.x_min, b.y_min, b.x_max, b.y_max) - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Plain IoU, for oracles that need exact arithmetic on the same inputs.
pub fn plain_iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let w = (a.x_max.min(b.x_max) - a.x_min.max(b.x_min)).max(0.0);
    let h = (a.y_max.min(b.y_max) - a.y_min.max(b.y_min)).max(0.0);
    let inter = w * h;
    let area = |r: &BoundingBox| (r.x_max - r.x_min) * (r.y_max - r.y_min);
    let union = area(a) + area(b) - inter;
    if union <= 0.0 {
        0.0
    } else {
        inter / union
    }
}

/// Indices sorted by score descending, lower index first on ties.
pub fn priority(dets: &[Detection]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..dets.len()).collect();
    idx.sort_by(|&i, &j| dets[j].score.partial_cmp(&dets[i].score).unwrap().then(i.cmp(&j)));
    idx
}

/// Brute-force NMS: searches every subset for the one that is a fixed point
/// of "kept iff no kept detection of higher priority overlaps it at or above
/// the threshold". Panics unless exactly one subset qualifies.
pub fn brute_nms(dets: &[Detection], thr: f64) -> Vec<Detection> {
    assert!(dets.len() <= 16);
    let order = priority(dets);
    let rank: Vec<usize> = {
        let mut r = vec![0; dets.len()];
        for (k, &i) in order.iter().enumerate() {
            r[i] = k;
        }
        r
    };
    let mut found = Vec::new();
    for mask in 0u32..(1 << dets.len()) {
        let kept = |i: usize| mask >> i & 1 == 1;
        let ok = (0..dets.len()).all(|i| {
            let blocked = (0..dets.len())
                .any(|j| kept(j) && rank[j] < rank[i] && plain_iou(&dets[i].bbox, &dets[j].bbox) >= thr);
            kept(i) == !blocked
        });
        if ok {
            found.push(mask);
        }
    }
    assert_eq!(found.len(), 1, "fixed point must be unique");
    order.into_iter().filter(|&i| found[0] >> i & 1 == 1).map(|i| dets[i]).collect()
}

/// One image for the brute-force evaluator.
#[derive(Debug, Clone)]
pub struct OracleImage {
    pub id: String,
    pub dets: Vec<Detection>,
    pub gts: Vec<BoundingBox>,
}

pub const THRESHOLDS: [f64; 10] = [0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95];

/// AP at one threshold, and the TP count. Matching walks each image's
/// detections best-first and takes the best unmatched ground truth; AP is the
/// mean over 101 recall levels of the best precision of any ranked prefix
/// reaching that recall.
pub fn brute_ap(images: &[OracleImage], thr: f64) -> (f64, usize) {
    let total_gt: usize = images.iter().map(|im| im.gts.len()).sum();
    let mut ranked: Vec<(f64, &str, usize, usize, bool)> = Vec::new();
    for (ii, im) in images.iter().enumerate() {
        let mut used = vec![false; im.gts.len()];
        for d in priority(&im.dets) {
            let mut best: Option<(usize, f64)> = None;
            for (g, gt) in im.gts.iter().enumerate() {
                if used[g] {
                    continue;
                }
                let v = plain_iou(&im.dets[d].bbox, gt);
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((g, v));
                }
            }
            let hit = matches!(best, Some((_, v)) if v >= thr);
            if hit {
                used[best.unwrap().0] = true;
            }
            ranked.push((im.dets[d].score, &im.id, ii, d, hit));
        }
    }
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(b.1)).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3)));
    let tp_total = ranked.iter().filter(|r| r.4).count();
    if total_gt == 0 {
        return (0.0, tp_total);
    }
    let mut prefixes = Vec::new();
    let mut tp = 0;
    for (n, r) in ranked.iter().enumerate() {
        tp += r.4 as usize;
        prefixes.push((tp as f64 / total_gt as f64, tp as f64 / (n + 1) as f64));
    }
    let mut sum = 0.0;
    for k in 0..=100 {
        let level = k as f64 / 100.0;
        sum += prefixes.iter().filter(|p| p.0 >= level).map(|p| p.1).fold(0.0, f64::max);
    }
    (sum / 101.0, tp_total)
}

pub fn brute_map(images: &[OracleImage]) -> f64 {
    THRESHOLDS.iter().map(|&t| brute_ap(images, t).0).sum::<f64>() / THRESHOLDS.len() as f64
}

/// Alert oracle: raised after `s` iff the text after the last run of `k_off`
/// misses contains `k_on` consecutive hits.
pub fn oracle_raised(s: &str, k_on: usize, k_off: usize) -> bool {
    let off = "m".repeat(k_off);
    let tail = s.rfind(&off).map_or(s, |i| &s[i + k_off..]);
    tail.contains(&"h".repeat(k_on))
}

pub fn fixtures() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Number of recall samples used by [`average_precision`] (0.00 to 1.00).
pub const RECALL_SAMPLES: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint {
    pub recall: f64,
    pub precision: f64,
}

/// Cumulative precision/recall after each detection, in score order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PrCurve {
    pub points: Vec<PrPoint>,
}

/// Builds the raw curve from score-sorted true/false-positive flags. With no
/// ground truth, recall stays at 0.
pub fn pr_curve(flags: &[bool], total_gt: usize) -> PrCurve {
    let mut tp = 0usize;
    let points = flags
        .iter()
        .enumerate()
        .map(|(i, &hit)| {
            tp += hit as usize;
            let recall = if total_gt == 0 { 0.0 } else { tp as f64 / total_gt as f64 };
            PrPoint { recall, precision: tp as f64 / (i + 1) as f64 }
        })
        .collect();
    PrCurve { points }
}

impl PrCurve {
    /// Precision made non-increasing by a right-to-left running maximum.
    pub fn envelope(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.points.iter().map(|p| p.precision).collect();
        for i in (0..out.len().saturating_sub(1)).rev() {
            out[i] = out[i].max(out[i + 1]);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("recall,precision\n");
        for p in &self.points {
            s.push_str(&format!("{},{}\n", p.recall, p.precision));
        }
        s
    }
}

/// 101-point interpolated AP: the mean over r in {0, 0.01, ..., 1} of the
/// best precision achieved at recall >= r (0 when r is never reached).
pub fn average_precision(curve: &PrCurve) -> f64 {
    // no recall ever achieved (including the no-ground-truth case) scores 0
    if curve.points.last().is_none_or(|p| p.recall == 0.0) {
        return 0.0;
    }
    let env = curve.envelope();
    let mut sum = 0.0;
    let mut i = 0;
    for k in 0..RECALL_SAMPLES {
        let r = k as f64 / (RECALL_SAMPLES - 1) as f64;
        // recall is non-decreasing, so the first index reaching r is monotone in k
        while i < curve.points.len() && curve.points[i].recall < r {
            i += 1;
        }
        if i == curve.points.len() {
            break;
        }
        sum += env[i];
    }
    sum / RECALL_SAMPLES as f64
}

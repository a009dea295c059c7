//! Dataset statistics: box-center heatmap and instances-per-image histogram.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{DatasetError, ImageAnnotation};

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSummary {
    pub image_count: usize,
    pub instance_count: usize,
    /// `heatmap[row][col]`, row indexing normalized y and col normalized x.
    pub heatmap: Vec<Vec<u64>>,
    /// instances per image -> number of images
    pub histogram: BTreeMap<usize, usize>,
}

/// Half-open cell index of `v` in `[0, 1]` split into `grid` cells; `1.0`
/// and anything above fall in the last cell, negatives in the first.
pub(crate) fn cell_index(v: f64, grid: usize) -> usize {
    if v.is_nan() || v <= 0.0 {
        return 0;
    }
    let g = grid as f64;
    let mut k = ((v * g).floor() as usize).min(grid - 1);
    // make the result agree with the comparisons k/g <= v < (k+1)/g
    while k + 1 < grid && (k + 1) as f64 / g <= v {
        k += 1;
    }
    while k > 0 && k as f64 / g > v {
        k -= 1;
    }
    k
}

pub fn summarize(items: &[ImageAnnotation], grid: usize) -> Result<DatasetSummary, DatasetError> {
    if grid == 0 {
        return Err(DatasetError::Grid);
    }
    let mut heatmap = vec![vec![0u64; grid]; grid];
    let mut histogram = BTreeMap::new();
    let mut instance_count = 0;
    for a in items {
        for b in &a.boxes {
            let (cx, cy) = b.center();
            let col = cell_index(cx / a.width as f64, grid);
            let row = cell_index(cy / a.height as f64, grid);
            heatmap[row][col] += 1;
        }
        instance_count += a.boxes.len();
        *histogram.entry(a.boxes.len()).or_insert(0) += 1;
    }
    Ok(DatasetSummary { image_count: items.len(), instance_count, heatmap, histogram })
}

impl DatasetSummary {
    pub fn grid(&self) -> usize {
        self.heatmap.len()
    }

    /// `image_count`, `instance_count` and `grid` as key=value lines.
    pub fn report(&self) -> String {
        format!(
            "image_count={}\ninstance_count={}\ngrid={}\nmean_instances_per_image={}\n",
            self.image_count,
            self.instance_count,
            self.grid(),
            if self.image_count == 0 { 0.0 } else { self.instance_count as f64 / self.image_count as f64 }
        )
    }

    /// One CSV row per heatmap row, top of the image first.
    pub fn heatmap_csv(&self) -> String {
        let mut s = String::new();
        for row in &self.heatmap {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("instances_per_image,image_count\n");
        for (k, v) in &self.histogram {
            let _ = writeln!(s, "{k},{v}");
        }
        s
    }
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::ConfigError;
use crate::geometry::Detection;

/// Camera placement of the right-hook test rig.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Placement {
    #[serde(rename = "A_front_mirror", alias = "A")]
    FrontMirror,
    #[serde(rename = "B_above", alias = "B")]
    Above,
    #[serde(rename = "C_rear", alias = "C")]
    Rear,
}

impl Placement {
    pub const ALL: [Placement; 3] = [Placement::FrontMirror, Placement::Above, Placement::Rear];

    pub fn tag(self) -> &'static str {
        match self {
            Placement::FrontMirror => "A_front_mirror",
            Placement::Above => "B_above",
            Placement::Rear => "C_rear",
        }
    }

    pub fn letter(self) -> char {
        match self {
            Placement::FrontMirror => 'A',
            Placement::Above => 'B',
            Placement::Rear => 'C',
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Placement {
    type Err = ConfigError;

    /// Accepts the letter or the full tag, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Placement::ALL
            .into_iter()
            .find(|p| t.eq_ignore_ascii_case(p.tag()) || t.eq_ignore_ascii_case(&p.letter().to_string()))
            .ok_or_else(|| ConfigError::UnknownPlacement(s.to_string()))
    }
}

/// Blind-zone polygon in normalized image coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Zone {
    polygon: Vec<(f64, f64)>,
    placement: Placement,
}

const EDGE_EPS: f64 = 1e-12;

impl Zone {
    /// Checks vertex count, range and simplicity.
    pub fn new(polygon: Vec<(f64, f64)>, placement: Placement) -> Result<Self, ConfigError> {
        let field = format!("zone.{}", placement.tag());
        if polygon.len() < 3 {
            return Err(ConfigError::invalid(field, format!("needs at least 3 vertices, got {}", polygon.len())));
        }
        for &(x, y) in &polygon {
            if !((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)) {
                return Err(ConfigError::invalid(field, format!("vertex ({x}, {y}) outside [0, 1]²")));
            }
        }
        if signed_area(&polygon).abs() <= EDGE_EPS {
            return Err(ConfigError::invalid(field, "polygon has zero area"));
        }
        if !is_simple(&polygon) {
            return Err(ConfigError::invalid(field, "polygon edges intersect"));
        }
        Ok(Self { polygon, placement })
    }

    /// The whole image.
    pub fn full_frame(placement: Placement) -> Self {
        Self { polygon: vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], placement }
    }

    pub fn polygon(&self) -> &[(f64, f64)] {
        &self.polygon
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    /// Boundary-inclusive even-odd test.
    pub fn contains(&self, (px, py): (f64, f64)) -> bool {
        let n = self.polygon.len();
        let mut inside = false;
        for i in 0..n {
            let (ax, ay) = self.polygon[i];
            let (bx, by) = self.polygon[(i + 1) % n];
            if on_segment((px, py), (ax, ay), (bx, by)) {
                return true;
            }
            if (ay > py) != (by > py) {
                let x = ax + (py - ay) * (bx - ax) / (by - ay);
                if px < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Whether the bottom-center of a normalized detection box lies in the zone.
pub fn in_zone(det: &Detection, zone: &Zone) -> bool {
    zone.contains(det.bbox.bottom_center())
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn on_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> bool {
    let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
    cross(a, b, p).abs() <= EDGE_EPS * len.max(1.0)
        && p.0 >= a.0.min(b.0) - EDGE_EPS
        && p.0 <= a.0.max(b.0) + EDGE_EPS
        && p.1 >= a.1.min(b.1) - EDGE_EPS
        && p.1 <= a.1.max(b.1) + EDGE_EPS
}

pub(crate) fn signed_area(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].0 * poly[(i + 1) % n].1 - poly[(i + 1) % n].0 * poly[i].1).sum::<f64>() / 2.0
}

fn segments_touch(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let (d1, d2) = (cross(a, b, c), cross(a, b, d));
    let (d3, d4) = (cross(c, d, a), cross(c, d, b));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

fn is_simple(poly: &[(f64, f64)]) -> bool {
    let n = poly.len();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let (c, d) = (poly[j], poly[(j + 1) % n]);
            if adjacent {
                // neighbours share one vertex; they may only overlap if they fold back
                let shared = if j == i + 1 { b } else { a };
                let (other_a, other_b) = if j == i + 1 { (a, d) } else { (b, c) };
                if a == b || c == d {
                    return false;
                }
                if cross(shared, other_a, other_b).abs() <= EDGE_EPS
                    && (other_a.0 - shared.0) * (other_b.0 - shared.0) + (other_a.1 - shared.1) * (other_b.1 - shared.1)
                        > 0.0
                {
                    return false;
                }
            } else if segments_touch(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Preset zones: the scenario's lane band `y ∈ [-10, -2]` ft projected through
/// each default camera, clipped to the frame and convex-hulled. They depend on
/// the default camera calibration; `scenario::derive_zone` recomputes them.
pub const PRESET_A: &[(f64, f64)] =
    &[(0.000000, 0.574035), (0.400797, 0.266675), (0.488977, 0.266675), (0.382727, 1.000000), (0.000000, 1.000000)];
pub const PRESET_B: &[(f64, f64)] = &[(0.432497, 1.000000), (0.473292, 0.000000), (0.686958, 0.000000), (0.972520, 1.000000)];
pub const PRESET_C: &[(f64, f64)] = &[(0.510877, 0.280353), (0.597891, 0.280353), (0.949019, 1.000000), (0.549891, 1.000000)];

/// Preset polygon for `placement`, or the override verbatim when given.
pub fn zone_for_placement(placement: Placement, overrides: Option<&[(f64, f64)]>) -> Result<Zone, ConfigError> {
    let poly = match overrides {
        Some(p) => p.to_vec(),
        None => match placement {
            Placement::FrontMirror => PRESET_A,
            Placement::Above => PRESET_B,
            Placement::Rear => PRESET_C,
        }
        .to_vec(),
    };
    Zone::new(poly, placement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundingBox;
    use proptest::prelude::*;

    fn det(x0: f64, y0: f64, x1: f64, y1: f64) -> Detection {
        Detection::new(BoundingBox::new(x0, y0, x1, y1).unwrap(), 0.9).unwrap()
    }

    fn quad() -> Zone {
        Zone::new(vec![(0.0, 0.0), (0.5, 0.0), (0.5, 0.5), (0.0, 0.5)], Placement::FrontMirror).unwrap()
    }

    /// Winding number in exact integer arithmetic, independent of `contains`.
    fn winding_oracle(poly: &[(i64, i64)], p: (i64, i64)) -> bool {
        let n = poly.len();
        let mut wn = 0i32;
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let c = (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1);
            let within = p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1);
            if c == 0 && within {
                return true;
            }
            if a.1 <= p.1 {
                if b.1 > p.1 && c > 0 {
                    wn += 1;
                }
            } else if b.1 <= p.1 && c < 0 {
                wn -= 1;
            }
        }
        wn != 0
    }

    #[test]
    fn universal_and_disjoint() {
        let full = Zone::full_frame(Placement::Above);
        assert!(in_zone(&det(0.4, 0.4, 0.6, 0.6), &full));
        assert!(!in_zone(&det(0.6, 0.6, 0.9, 0.9), &quad()));
    }

    #[test]
    fn edge_and_vertex_are_inside() {
        // bottom-center (0.25, 0.5) lies on the lower edge
        assert!(in_zone(&det(0.1, 0.2, 0.4, 0.5), &quad()));
        assert!(quad().contains((0.5, 0.5)));
        assert!(quad().contains((0.0, 0.25)));
        assert!(!quad().contains((0.5 + 1e-9, 0.25)));
    }

    #[test]
    fn oracle_agreement_on_grid() {
        // integer coordinates in 1/40 units, so the oracle sees the exact geometry
        let zones: [Vec<(i64, i64)>; 3] = [
            vec![(0, 0), (20, 0), (20, 20), (0, 20)],
            vec![(4, 36), (20, 4), (36, 36)],
            vec![(0, 0), (40, 0), (40, 40), (20, 10), (0, 40)],
        ];
        let scale = |(x, y): (i64, i64)| (x as f64 / 40.0, y as f64 / 40.0);
        for poly in zones {
            let z = Zone::new(poly.iter().copied().map(scale).collect(), Placement::Rear).unwrap();
            for i in 0..=40 {
                for j in 0..=40 {
                    assert_eq!(z.contains(scale((i, j))), winding_oracle(&poly, (i, j)), "{poly:?} {i},{j}");
                }
            }
        }
    }

    #[test]
    fn validation() {
        let p = Placement::FrontMirror;
        assert!(Zone::new(vec![(0.0, 0.0), (1.0, 1.0)], p).is_err());
        assert!(Zone::new(vec![(0.0, 0.0), (1.5, 0.0), (0.0, 1.0)], p).is_err());
        assert!(Zone::new(vec![(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)], p).is_err());
        // bow tie
        assert!(Zone::new(vec![(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)], p).is_err());
        assert!(Zone::new(vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], p).is_ok());
    }

    #[test]
    fn placement_tags() {
        assert_eq!("A".parse::<Placement>().unwrap(), Placement::FrontMirror);
        assert_eq!("b_above".parse::<Placement>().unwrap(), Placement::Above);
        assert_eq!("C_rear".parse::<Placement>().unwrap(), Placement::Rear);
        assert!(matches!("D".parse::<Placement>(), Err(ConfigError::UnknownPlacement(_))));
    }

    #[test]
    fn presets_are_valid_and_overrides_win() {
        for p in Placement::ALL {
            zone_for_placement(p, None).unwrap();
        }
        let custom = [(0.1, 0.1), (0.9, 0.1), (0.5, 0.9)];
        assert_eq!(zone_for_placement(Placement::Above, Some(&custom)).unwrap().polygon(), &custom);
    }

    proptest! {
        #[test]
        fn rotation_invariance(px in 0.0f64..1.0, py in 0.0f64..1.0, k in 0usize..5) {
            let poly = vec![(0.1, 0.2), (0.6, 0.05), (0.95, 0.5), (0.55, 0.95), (0.2, 0.7)];
            let mut rotated = poly.clone();
            rotated.rotate_left(k);
            let a = Zone::new(poly, Placement::Above).unwrap();
            let b = Zone::new(rotated, Placement::Above).unwrap();
            prop_assert_eq!(a.contains((px, py)), b.contains((px, py)));
        }
    }
}

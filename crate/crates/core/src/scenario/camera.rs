//! Pinhole camera in the truck's world frame: x forward along the truck,
//! y to the left, z up, feet.

use crate::geometry::BoundingBox;

pub type Point3 = [f64; 3];

fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: Point3, b: Point3) -> Point3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    pub position: Point3,
    forward: Point3,
    right: Point3,
    down: Point3,
    pub fx: f64,
    pub fy: f64,
    pub width: u32,
    pub height: u32,
    /// points closer than this along the optical axis are not imaged
    pub near: f64,
}

impl Camera {
    /// `yaw_deg` turns left from +x; `pitch_down_deg` tilts the axis below
    /// the horizon. Square pixels, principal point at the image center.
    pub fn new(position: Point3, yaw_deg: f64, pitch_down_deg: f64, hfov_deg: f64, width: u32, height: u32) -> Self {
        let (yaw, pitch) = (yaw_deg.to_radians(), pitch_down_deg.to_radians());
        let forward = [pitch.cos() * yaw.cos(), pitch.cos() * yaw.sin(), -pitch.sin()];
        let right = [yaw.sin(), -yaw.cos(), 0.0];
        let down = cross(forward, right);
        let fx = (width as f64 / 2.0) / (hfov_deg.to_radians() / 2.0).tan();
        Self { position, forward, right, down, fx, fy: fx, width, height, near: 0.5 }
    }

    /// World point to camera coordinates (right, down, depth).
    pub fn to_camera(&self, p: Point3) -> Point3 {
        let v = sub(p, self.position);
        [dot(v, self.right), dot(v, self.down), dot(v, self.forward)]
    }

    /// Camera coordinates to pixels.
    pub fn image_of(&self, c: Point3) -> (f64, f64) {
        let (cx, cy) = (self.width as f64 / 2.0, self.height as f64 / 2.0);
        (cx + self.fx * c[0] / c[2], cy + self.fy * c[1] / c[2])
    }

    /// Pixel position, or `None` when the point is not in front of the near plane.
    pub fn project(&self, p: Point3) -> Option<(f64, f64)> {
        let c = self.to_camera(p);
        (c[2] > self.near).then(|| self.image_of(c))
    }

    /// Unclipped pixel bounding box of `points`; `None` if any is behind the near plane.
    pub fn project_hull_box(&self, points: &[Point3]) -> Option<BoundingBox> {
        let mut b = BoundingBox { x_min: f64::INFINITY, y_min: f64::INFINITY, x_max: f64::NEG_INFINITY, y_max: f64::NEG_INFINITY };
        for &p in points {
            let (u, v) = self.project(p)?;
            b.x_min = b.x_min.min(u);
            b.y_min = b.y_min.min(v);
            b.x_max = b.x_max.max(u);
            b.y_max = b.y_max.max(v);
        }
        (!points.is_empty()).then_some(b)
    }
}

/// Clips a planar world polygon to the half-space in front of the near plane.
pub fn clip_to_near(camera: &Camera, poly: &[Point3]) -> Vec<Point3> {
    let depth = |p: Point3| camera.to_camera(p)[2] - camera.near;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let (da, db) = (depth(a), depth(b));
        if da >= 0.0 {
            out.push(a);
        }
        if (da >= 0.0) != (db >= 0.0) {
            let t = da / (da - db);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])]);
        }
    }
    out
}

/// Sutherland-Hodgman clip of a 2-D polygon to `[0, 1]²`.
pub fn clip_to_unit_square(poly: &[(f64, f64)]) -> Vec<(f64, f64)> {
    type Inside = fn((f64, f64)) -> bool;
    let edges: [(Inside, usize, f64); 4] = [
        (|p| p.0 >= 0.0, 0, 0.0),
        (|p| p.0 <= 1.0, 0, 1.0),
        (|p| p.1 >= 0.0, 1, 0.0),
        (|p| p.1 <= 1.0, 1, 1.0),
    ];
    let mut cur = poly.to_vec();
    for (inside, axis, bound) in edges {
        let input = std::mem::take(&mut cur);
        for i in 0..input.len() {
            let (a, b) = (input[i], input[(i + 1) % input.len()]);
            if inside(a) {
                cur.push(a);
            }
            if inside(a) != inside(b) {
                let (ka, kb) = if axis == 0 { (a.0, b.0) } else { (a.1, b.1) };
                let t = (bound - ka) / (kb - ka);
                let mut p = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
                if axis == 0 {
                    p.0 = bound;
                } else {
                    p.1 = bound;
                }
                cur.push(p);
            }
        }
    }
    cur
}

/// Counter-clockwise convex hull (monotone chain), collinear points dropped.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

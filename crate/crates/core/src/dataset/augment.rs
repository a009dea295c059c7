//! Seeded photometric and geometric augmentation with box remapping.
//!
//! Fixed order: zoom-crop, hue, saturation, brightness, Gaussian blur,
//! salt-and-pepper noise. Each magnitude is drawn uniformly from its range.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DatasetError, ImageAnnotation};
use crate::geometry::BoundingBox;
use crate::par::{self, Execution};
use crate::raster::Raster;

/// Boxes keeping less than this fraction of their area after a crop are dropped.
pub const MIN_SURVIVING_AREA: f64 = 0.25;

/// Magnitude ranges. Zoom, blur and noise sample from `[0, max]`; hue,
/// saturation and brightness from `[-max, +max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentationParams {
    pub zoom: f64,
    pub hue_degrees: f64,
    pub saturation: f64,
    pub brightness: f64,
    pub blur_sigma: f64,
    pub noise_fraction: f64,
    pub seed: u64,
}

impl Default for AugmentationParams {
    /// zoom 0-31%, hue +/-25 deg, saturation +/-22%, brightness +/-13%,
    /// blur 0-0.125 px, noise 0-2%.
    fn default() -> Self {
        Self {
            zoom: 0.31,
            hue_degrees: 25.0,
            saturation: 0.22,
            brightness: 0.13,
            blur_sigma: 0.125,
            noise_fraction: 0.02,
            seed: 0,
        }
    }
}

impl AugmentationParams {
    pub fn identity(seed: u64) -> Self {
        Self { zoom: 0.0, hue_degrees: 0.0, saturation: 0.0, brightness: 0.0, blur_sigma: 0.0, noise_fraction: 0.0, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let bad = |what: &str| Err(DatasetError::InvalidParams(what.to_string()));
        let fields = [self.zoom, self.hue_degrees, self.saturation, self.brightness, self.blur_sigma, self.noise_fraction];
        if fields.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return bad("magnitudes must be finite and non-negative");
        }
        if self.zoom >= 1.0 {
            return bad("zoom must be below 1");
        }
        if self.saturation > 1.0 || self.brightness > 1.0 {
            return bad("saturation and brightness magnitudes must not exceed 1");
        }
        if self.noise_fraction > 1.0 {
            return bad("noise fraction must not exceed 1");
        }
        Ok(())
    }

    /// Draws one set of concrete magnitudes from `self.seed`.
    pub fn sample(&self) -> AugmentationDraw {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut unit = || rng.random::<f64>();
        let symmetric = |u: f64, m: f64| (2.0 * u - 1.0) * m;
        let zoom = unit() * self.zoom;
        let crop_x = unit();
        let crop_y = unit();
        let hue_degrees = symmetric(unit(), self.hue_degrees);
        let saturation = symmetric(unit(), self.saturation);
        let brightness = symmetric(unit(), self.brightness);
        let blur_sigma = unit() * self.blur_sigma;
        let noise_fraction = unit() * self.noise_fraction;
        let noise_seed = rng.random();
        AugmentationDraw { zoom, crop_x, crop_y, hue_degrees, saturation, brightness, blur_sigma, noise_fraction, noise_seed }
    }
}

/// Concrete magnitudes for one augmentation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentationDraw {
    /// crop side is `1 - zoom` of the image side
    pub zoom: f64,
    /// crop window position within the available slack, in `[0, 1]`
    pub crop_x: f64,
    pub crop_y: f64,
    pub hue_degrees: f64,
    pub saturation: f64,
    pub brightness: f64,
    pub blur_sigma: f64,
    pub noise_fraction: f64,
    pub noise_seed: u64,
}

/// Crop rectangle in source pixels; `scale` is the side fraction kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CropWindow {
    pub x0: f64,
    pub y0: f64,
    pub scale: f64,
}

impl CropWindow {
    pub fn for_image(width: u32, height: u32, zoom: f64, pos_x: f64, pos_y: f64) -> Self {
        let scale = 1.0 - zoom;
        Self { x0: pos_x * (1.0 - scale) * width as f64, y0: pos_y * (1.0 - scale) * height as f64, scale }
    }

    fn rect(&self, width: u32, height: u32) -> BoundingBox {
        BoundingBox {
            x_min: self.x0,
            y_min: self.y0,
            x_max: self.x0 + self.scale * width as f64,
            y_max: self.y0 + self.scale * height as f64,
        }
    }
}

/// Applies `params` (sampled from its seed) to one image.
pub fn augment(
    image: &Raster,
    annot: &ImageAnnotation,
    params: &AugmentationParams,
) -> Result<(Raster, ImageAnnotation), DatasetError> {
    params.validate()?;
    apply_draw(image, annot, &params.sample())
}

pub fn apply_draw(
    image: &Raster,
    annot: &ImageAnnotation,
    draw: &AugmentationDraw,
) -> Result<(Raster, ImageAnnotation), DatasetError> {
    if image.width() != annot.width || image.height() != annot.height {
        return Err(DatasetError::DimensionMismatch {
            image_id: annot.image_id.clone(),
            raster: (image.width(), image.height()),
            annotation: (annot.width, annot.height),
        });
    }
    let (mut img, ann) = if draw.zoom > 0.0 {
        let win = CropWindow::for_image(annot.width, annot.height, draw.zoom, draw.crop_x, draw.crop_y);
        zoom_crop(image, annot, win)
    } else {
        (image.clone(), annot.clone())
    };
    if draw.hue_degrees != 0.0 {
        shift_hue(&mut img, draw.hue_degrees);
    }
    if draw.saturation != 0.0 {
        scale_saturation(&mut img, draw.saturation);
    }
    if draw.brightness != 0.0 {
        scale_brightness(&mut img, draw.brightness);
    }
    if draw.blur_sigma > 0.0 {
        img = gaussian_blur(&img, draw.blur_sigma);
    }
    if draw.noise_fraction > 0.0 {
        salt_and_pepper(&mut img, draw.noise_fraction, draw.noise_seed);
    }
    Ok((img, ann))
}

/// Crops `win` and resizes back to the input size with bilinear sampling.
/// Boxes are remapped and clipped; those keeping less than
/// [`MIN_SURVIVING_AREA`] of their area are dropped.
pub fn zoom_crop(image: &Raster, annot: &ImageAnnotation, win: CropWindow) -> (Raster, ImageAnnotation) {
    let (w, h) = (image.width(), image.height());
    let mut out = Raster::new(w, h);
    let max_x = (w - 1) as f64;
    let max_y = (h - 1) as f64;
    for py in 0..h {
        let sy = (win.y0 + (py as f64 + 0.5) * win.scale - 0.5).clamp(0.0, max_y);
        let y0 = sy.floor() as u32;
        let y1 = (y0 + 1).min(h - 1);
        let ty = sy - y0 as f64;
        for px in 0..w {
            let sx = (win.x0 + (px as f64 + 0.5) * win.scale - 0.5).clamp(0.0, max_x);
            let x0 = sx.floor() as u32;
            let x1 = (x0 + 1).min(w - 1);
            let tx = sx - x0 as f64;
            let (a, b, c, d) = (image.get(x0, y0), image.get(x1, y0), image.get(x0, y1), image.get(x1, y1));
            let mut rgb = [0u8; 3];
            for k in 0..3 {
                let top = a[k] as f64 * (1.0 - tx) + b[k] as f64 * tx;
                let bottom = c[k] as f64 * (1.0 - tx) + d[k] as f64 * tx;
                rgb[k] = (top * (1.0 - ty) + bottom * ty).round().clamp(0.0, 255.0) as u8;
            }
            out.put(px, py, rgb);
        }
    }

    let window = win.rect(w, h);
    let (fw, fh) = (w as f64, h as f64);
    let boxes = annot
        .boxes
        .iter()
        .filter_map(|b| {
            let inter = b.intersection(&window)?;
            let area = b.area();
            if area > 0.0 && inter.area() / area < MIN_SURVIVING_AREA {
                return None;
            }
            let mapped = BoundingBox {
                x_min: (inter.x_min - win.x0) / win.scale,
                y_min: (inter.y_min - win.y0) / win.scale,
                x_max: (inter.x_max - win.x0) / win.scale,
                y_max: (inter.y_max - win.y0) / win.scale,
            };
            Some(mapped.clip(fw, fh))
        })
        .collect();
    (out, ImageAnnotation { boxes, ..annot.clone() })
}

/// RGB in `[0, 1]` to (hue degrees in `[0, 360)`, saturation, value).
pub fn rgb_to_hsv(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let hue = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let sat = if max == 0.0 { 0.0 } else { delta / max };
    (hue, sat, max)
}

pub fn hsv_to_rgb(hue: f64, sat: f64, val: f64) -> (f64, f64, f64) {
    let h = hue.rem_euclid(360.0) / 60.0;
    let c = val * sat;
    let x = c * (1.0 - (h.rem_euclid(2.0) - 1.0).abs());
    let m = val - c;
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    (r + m, g + m, b + m)
}

fn to_unit(px: &[u8]) -> (f64, f64, f64) {
    (px[0] as f64 / 255.0, px[1] as f64 / 255.0, px[2] as f64 / 255.0)
}

fn from_unit(px: &mut [u8], (r, g, b): (f64, f64, f64)) {
    for (dst, v) in px.iter_mut().zip([r, g, b]) {
        *dst = (v * 255.0).round().clamp(0.0, 255.0) as u8;
    }
}

pub fn shift_hue(img: &mut Raster, degrees: f64) {
    for px in img.pixels_mut() {
        let (r, g, b) = to_unit(px);
        let (h, s, v) = rgb_to_hsv(r, g, b);
        from_unit(px, hsv_to_rgb(h + degrees, s, v));
    }
}

/// Multiplies HSV saturation by `1 + fraction`.
pub fn scale_saturation(img: &mut Raster, fraction: f64) {
    for px in img.pixels_mut() {
        let (r, g, b) = to_unit(px);
        let (h, s, v) = rgb_to_hsv(r, g, b);
        from_unit(px, hsv_to_rgb(h, (s * (1.0 + fraction)).clamp(0.0, 1.0), v));
    }
}

/// Multiplies every channel by `1 + fraction`.
pub fn scale_brightness(img: &mut Raster, fraction: f64) {
    let f = 1.0 + fraction;
    for c in img.as_bytes_mut() {
        *c = (*c as f64 * f).round().clamp(0.0, 255.0) as u8;
    }
}

/// Separable Gaussian, radius `ceil(3 sigma)`, edges clamped.
pub fn gaussian_blur(img: &Raster, sigma: f64) -> Raster {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut kernel: Vec<f64> = (-radius..=radius).map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = kernel.iter().sum();
    kernel.iter_mut().for_each(|k| *k /= total);

    let (w, h) = (img.width() as i64, img.height() as i64);
    let src = img.as_bytes();
    let idx = |x: i64, y: i64| ((y * w + x) * 3) as usize;

    let mut tmp = vec![0f64; src.len()];
    for y in 0..h {
        for x in 0..w {
            for (k, wgt) in kernel.iter().enumerate() {
                let sx = (x + k as i64 - radius).clamp(0, w - 1);
                for c in 0..3 {
                    tmp[idx(x, y) + c] += wgt * src[idx(sx, y) + c] as f64;
                }
            }
        }
    }
    let mut out = vec![0u8; src.len()];
    for y in 0..h {
        for x in 0..w {
            for c in 0..3 {
                let v: f64 = kernel
                    .iter()
                    .enumerate()
                    .map(|(k, wgt)| wgt * tmp[idx(x, (y + k as i64 - radius).clamp(0, h - 1)) + c])
                    .sum();
                out[idx(x, y) + c] = v.round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    Raster::from_raw(img.width(), img.height(), out).expect("same dimensions")
}

/// Sets `round(fraction * pixels)` distinct pixels to pure black or white.
pub fn salt_and_pepper(img: &mut Raster, fraction: f64, seed: u64) {
    let total = img.width() as usize * img.height() as usize;
    let n = ((fraction * total as f64).round() as usize).min(total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = index::sample(&mut rng, total, n);
    let bytes = img.as_bytes_mut();
    for i in picked.iter() {
        let v = if rng.random::<bool>() { 255 } else { 0 };
        bytes[i * 3..i * 3 + 3].fill(v);
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for variant `variant` of `image_id` under `master`. Depends on the
/// image id rather than its position, so reordering a dataset does not
/// change any image's augmentations.
pub fn derive_seed(master: u64, image_id: &str, variant: u32) -> u64 {
    splitmix64(master ^ splitmix64(fnv1a(image_id.as_bytes()) ^ splitmix64(variant as u64)))
}

/// Number of augmented copies emitted per original by [`triple_dataset`].
pub const VARIANTS_PER_IMAGE: u32 = 2;

/// Emits each original followed by two augmented variants (`<id>_aug1`,
/// `<id>_aug2`), each seeded from `seed` and the image id.
pub fn triple_dataset(
    items: &[ImageAnnotation],
    images: &[Raster],
    template: &AugmentationParams,
    seed: u64,
) -> Result<Vec<(ImageAnnotation, Raster)>, DatasetError> {
    triple_dataset_with(Execution::default(), items, images, template, seed)
}

pub fn triple_dataset_with(
    exec: Execution,
    items: &[ImageAnnotation],
    images: &[Raster],
    template: &AugmentationParams,
    seed: u64,
) -> Result<Vec<(ImageAnnotation, Raster)>, DatasetError> {
    if items.len() != images.len() {
        return Err(DatasetError::LengthMismatch { annotations: items.len(), images: images.len() });
    }
    template.validate()?;
    let per_item = par::map_slice(exec, items, |i, annot| {
        let image = &images[i];
        let mut out = vec![(annot.clone(), image.clone())];
        for v in 1..=VARIANTS_PER_IMAGE {
            let params = template.with_seed(derive_seed(seed, &annot.image_id, v));
            let (img, mut ann) = augment(image, annot, &params)?;
            ann.image_id = format!("{}_aug{v}", annot.image_id);
            out.push((ann, img));
        }
        Ok(out)
    });
    let mut all = Vec::with_capacity(items.len() * 3);
    for r in per_item {
        all.extend(r?);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(a: f64, b: f64, c: f64, d: f64) -> BoundingBox {
        BoundingBox::new(a, b, c, d).unwrap()
    }

    fn gradient(w: u32, h: u32) -> Raster {
        let mut r = Raster::new(w, h);
        for y in 0..h {
            for x in 0..w {
                r.put(x, y, [(x * 255 / w.max(1)) as u8, (y * 255 / h.max(1)) as u8, ((x + y) % 256) as u8]);
            }
        }
        r
    }

    /// Alternate HSV -> RGB formula: f(n) = v - v s max(0, min(k, 4 - k, 1)),
    /// k = (n + h / 60) mod 6.
    fn reference_hsv(h: f64, s: f64, v: f64) -> [f64; 3] {
        let f = |n: f64| {
            let k = (n + h / 60.0).rem_euclid(6.0);
            v - v * s * k.min(4.0 - k).clamp(0.0, 1.0)
        };
        [f(5.0), f(3.0), f(1.0)]
    }

    fn reference_hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
        reference_hsv(h, s, v).map(|c| (c * 255.0).round() as u8)
    }

    #[test]
    fn identity_params_are_exact() {
        let img = gradient(37, 23);
        let ann = ImageAnnotation::new("g", 37, 23, vec![bx(1., 2., 20., 22.), bx(0., 0., 0., 0.)]);
        let (out, out_ann) = augment(&img, &ann, &AugmentationParams::identity(99)).unwrap();
        assert_eq!(out, img);
        assert_eq!(out_ann, ann);
    }

    #[test]
    fn red_plus_120_degrees_is_green() {
        let mut img = Raster::filled(2, 2, [255, 0, 0]);
        shift_hue(&mut img, 120.0);
        assert_eq!(reference_hsv_to_rgb(0.0 + 120.0, 1.0, 1.0), [0, 255, 0]);
        assert!(img.pixels().all(|p| p == [0, 255, 0]));
    }

    #[test]
    fn hue_shift_agrees_with_reference_formula() {
        let img = gradient(16, 16);
        for deg in [-25.0, -7.5, 13.0, 25.0, 200.0] {
            let mut shifted = img.clone();
            shift_hue(&mut shifted, deg);
            for (src, dst) in img.pixels().zip(shifted.pixels()) {
                let (h, s, v) = rgb_to_hsv(src[0] as f64 / 255.0, src[1] as f64 / 255.0, src[2] as f64 / 255.0);
                let (r, g, b) = hsv_to_rgb(h + deg, s, v);
                let want = reference_hsv(h + deg, s, v);
                for (got, w) in [r, g, b].into_iter().zip(want) {
                    assert!((got - w).abs() < 1e-12, "{src:?} by {deg}");
                }
                // rounding ties may land either side
                let expect = reference_hsv_to_rgb(h + deg, s, v);
                for (d, e) in dst.iter().zip(expect) {
                    assert!(d.abs_diff(e) <= 1, "{src:?} by {deg}: {dst:?} vs {expect:?}");
                }
            }
        }
    }

    #[test]
    fn hsv_round_trip_is_exact_on_bytes() {
        for r in (0..=255).step_by(5) {
            for g in (0..=255).step_by(15) {
                for b in (0..=255).step_by(17) {
                    let mut px = [r as u8, g as u8, b as u8];
                    let (h, s, v) = rgb_to_hsv(r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0);
                    from_unit(&mut px, hsv_to_rgb(h, s, v));
                    assert_eq!(px, [r as u8, g as u8, b as u8]);
                }
            }
        }
    }

    #[test]
    fn crop_drops_slivers_below_quarter_area() {
        // zoom 0.31 with the window pinned top-left keeps [0, 69] x [0, 69]
        let img = Raster::new(100, 100);
        let win = CropWindow::for_image(100, 100, 0.31, 0.0, 0.0);
        assert!((win.scale - 0.69).abs() < 1e-12);
        // 9x10 of a 20x10 box survives (45%); 3x10 of the other (15%)
        let keep = bx(60., 0., 80., 10.);
        let drop = bx(66., 0., 86., 10.);
        let ann = ImageAnnotation::new("z", 100, 100, vec![keep, drop]);
        let (_, out) = zoom_crop(&img, &ann, win);
        assert_eq!(out.boxes.len(), 1);
        let b = out.boxes[0];
        assert!((b.x_min - 60.0 / 0.69).abs() < 1e-9);
        assert_eq!(b.x_max, 100.0);
        assert!((b.y_max - 10.0 / 0.69).abs() < 1e-9);
    }

    #[test]
    fn blur_radius_and_flat_image() {
        let flat = Raster::filled(9, 7, [10, 200, 33]);
        assert_eq!(gaussian_blur(&flat, 2.0), flat);
        let mut spot = Raster::new(9, 9);
        spot.put(4, 4, [255, 255, 255]);
        let blurred = gaussian_blur(&spot, 1.0);
        assert!(blurred.get(4, 4)[0] < 255);
        assert!(blurred.get(5, 4)[0] > 0);
        // sigma 1 -> radius 3: nothing leaks four pixels away
        assert_eq!(blurred.get(0, 4), [0, 0, 0]);
    }

    #[test]
    fn noise_corrupts_requested_fraction() {
        let mut img = Raster::filled(20, 10, [128, 128, 128]);
        salt_and_pepper(&mut img, 0.1, 5);
        let changed = img.pixels().filter(|p| *p != [128, 128, 128]).count();
        assert_eq!(changed, 20);
        assert!(img.pixels().all(|p| p == [128; 3] || p == [0; 3] || p == [255; 3]));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let ann = ImageAnnotation::new("m", 10, 10, vec![]);
        assert!(matches!(
            augment(&Raster::new(5, 5), &ann, &AugmentationParams::default()),
            Err(DatasetError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn triple_counts_and_ids() {
        let items = vec![ImageAnnotation::new("a", 30, 20, vec![bx(5., 5., 15., 15.)])];
        let images = vec![gradient(30, 20)];
        let out = triple_dataset(&items, &images, &AugmentationParams::default(), 7).unwrap();
        let ids: Vec<&str> = out.iter().map(|(a, _)| a.image_id.as_str()).collect();
        assert_eq!(ids, ["a", "a_aug1", "a_aug2"]);
        assert_eq!(out[0].1, images[0]);
        let again = triple_dataset(&items, &images, &AugmentationParams::default(), 7).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn triple_sequential_and_parallel_agree() {
        let items: Vec<_> = (0..6).map(|i| ImageAnnotation::new(format!("i{i}"), 24, 18, vec![bx(2., 2., 12., 16.)])).collect();
        let images = vec![gradient(24, 18); 6];
        let p = AugmentationParams::default();
        assert_eq!(
            triple_dataset_with(Execution::Sequential, &items, &images, &p, 3).unwrap(),
            triple_dataset_with(Execution::Parallel, &items, &images, &p, 3).unwrap()
        );
    }

    proptest! {
        #[test]
        fn sampled_values_stay_in_range(seed: u64) {
            let p = AugmentationParams::default().with_seed(seed);
            let d = p.sample();
            prop_assert!((0.0..=p.zoom).contains(&d.zoom));
            prop_assert!(d.hue_degrees.abs() <= p.hue_degrees);
            prop_assert!(d.saturation.abs() <= p.saturation);
            prop_assert!(d.brightness.abs() <= p.brightness);
            prop_assert!((0.0..=p.blur_sigma).contains(&d.blur_sigma));
            prop_assert!((0.0..=p.noise_fraction).contains(&d.noise_fraction));
            prop_assert!((0.0..=1.0).contains(&d.crop_x) && (0.0..=1.0).contains(&d.crop_y));
        }

        #[test]
        fn augmented_boxes_stay_in_bounds(
            seed: u64,
            raw in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64), 0..5),
        ) {
            let (w, h) = (32u32, 24u32);
            let boxes = raw.iter().map(|&(a, b, c, d)| {
                bx(a.min(c) * w as f64, b.min(d) * h as f64, a.max(c) * w as f64, b.max(d) * h as f64)
            }).collect();
            let ann = ImageAnnotation::new("p", w, h, boxes);
            let params = AugmentationParams { zoom: 0.6, ..AugmentationParams::default() }.with_seed(seed);
            let (img, out) = augment(&gradient(w, h), &ann, &params).unwrap();
            prop_assert_eq!((img.width(), img.height()), (w, h));
            prop_assert!(out.boxes.len() <= ann.boxes.len());
            for b in &out.boxes {
                prop_assert!(b.x_min >= 0.0 && b.y_min >= 0.0 && b.x_max <= w as f64 && b.y_max <= h as f64);
                prop_assert!(b.x_min <= b.x_max && b.y_min <= b.y_max);
            }
        }
    }
}

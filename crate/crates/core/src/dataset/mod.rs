//! Single-class cyclist datasets in Pascal VOC form: parsing, splitting,
//! statistics and augmentation.

mod augment;
mod split;
mod summary;
mod voc;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use augment::{
    apply_draw, augment, derive_seed, gaussian_blur, hsv_to_rgb, rgb_to_hsv, salt_and_pepper, scale_brightness,
    scale_saturation, shift_hue, triple_dataset, triple_dataset_with, zoom_crop, AugmentationDraw, AugmentationParams,
    CropWindow, MIN_SURVIVING_AREA, VARIANTS_PER_IMAGE,
};
pub use split::split_dataset;
pub use summary::{summarize, DatasetSummary};
pub use voc::{
    load_voc_dir, load_voc_file, parse_voc, serialize_voc, serialize_voc_with_ext, write_voc_dir, ImageAnnotation,
    ParseError, ParsedVoc, CYCLIST_NAMES,
};

use crate::raster::{ImageError, Raster};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("train fraction must lie strictly between 0 and 1, got {0}")]
    TrainFraction(f64),
    #[error("heatmap grid must be at least 1")]
    Grid,
    #[error("{image_id}: raster is {raster:?} but annotation says {annotation:?}")]
    DimensionMismatch { image_id: String, raster: (u32, u32), annotation: (u32, u32) },
    #[error("{annotations} annotations but {images} images")]
    LengthMismatch { annotations: usize, images: usize },
    #[error("invalid augmentation parameters: {0}")]
    InvalidParams(String),
    #[error("no image file for {image_id} in {dir} (tried .ppm, .png)")]
    MissingImage { image_id: String, dir: PathBuf },
    #[error("image {path}: {source}")]
    Image { path: PathBuf, source: ImageError },
}

/// Finds `<image_id>.ppm` or `<image_id>.png` in `dir`.
pub fn find_image(dir: &Path, image_id: &str) -> Result<PathBuf, DatasetError> {
    ["ppm", "png"]
        .iter()
        .map(|ext| dir.join(format!("{image_id}.{ext}")))
        .find(|p| p.is_file())
        .ok_or_else(|| DatasetError::MissingImage { image_id: image_id.to_string(), dir: dir.to_path_buf() })
}

/// Loads the raster for every annotation from `dir`.
pub fn load_images(dir: &Path, items: &[ImageAnnotation]) -> Result<Vec<Raster>, DatasetError> {
    items
        .iter()
        .map(|a| {
            let path = find_image(dir, &a.image_id)?;
            Raster::load(&path).map_err(|source| DatasetError::Image { path, source })
        })
        .collect()
}

//! Pascal VOC annotation markup.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use thiserror::Error;

use crate::geometry::BoundingBox;

/// Object names accepted as the cyclist class (compared case-insensitively).
pub const CYCLIST_NAMES: &[&str] = &["cyclist"];

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed markup at line {line}: {message}")]
    Malformed { line: u32, message: String },
    #[error("missing <size> element")]
    MissingSize,
    #[error("line {line}: image dimensions must be positive, got {width}x{height}")]
    BadDimensions { line: u32, width: i64, height: i64 },
    #[error("line {line}: {message}")]
    Field { line: u32, message: String },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: Box<ParseError> },
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Ground truth for one image, in pixel coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageAnnotation {
    pub image_id: String,
    pub width: u32,
    pub height: u32,
    pub boxes: Vec<BoundingBox>,
}

impl ImageAnnotation {
    pub fn new(image_id: impl Into<String>, width: u32, height: u32, boxes: Vec<BoundingBox>) -> Self {
        Self { image_id: image_id.into(), width, height, boxes }
    }
}

/// Result of [`parse_voc`]: the annotation plus how many objects of other
/// classes were dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedVoc {
    pub annotation: ImageAnnotation,
    pub skipped: usize,
}

fn line_of(doc: &roxmltree::Document, node: roxmltree::Node) -> u32 {
    doc.text_pos_at(node.range().start).row
}

fn child<'a, 'i>(node: roxmltree::Node<'a, 'i>, name: &str) -> Option<roxmltree::Node<'a, 'i>> {
    node.children().find(|c| c.is_element() && c.has_tag_name(name))
}

fn child_text<'a>(node: roxmltree::Node<'a, '_>, name: &str) -> Option<&'a str> {
    child(node, name).and_then(|c| c.text()).map(str::trim)
}

fn number(doc: &roxmltree::Document, parent: roxmltree::Node, name: &str) -> Result<f64, ParseError> {
    let line = line_of(doc, parent);
    let text = child_text(parent, name)
        .ok_or_else(|| ParseError::Field { line, message: format!("missing <{name}>") })?;
    let v: f64 = text
        .parse()
        .map_err(|_| ParseError::Field { line, message: format!("<{name}> is not a number: {text:?}") })?;
    if !v.is_finite() {
        return Err(ParseError::Field { line, message: format!("<{name}> is not finite") });
    }
    Ok(v)
}

/// Parses one VOC annotation. Non-cyclist objects are skipped and counted;
/// boxes are clipped to the image. `image_id` is the `<filename>` stem, or
/// empty when the element is absent.
pub fn parse_voc(xml: &[u8]) -> Result<ParsedVoc, ParseError> {
    let text = std::str::from_utf8(xml).map_err(|e| {
        let line = xml[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() as u32 + 1;
        ParseError::Malformed { line, message: format!("invalid UTF-8: {e}") }
    })?;
    let doc = roxmltree::Document::parse(text)
        .map_err(|e| ParseError::Malformed { line: e.pos().row, message: e.to_string() })?;
    let root = doc.root_element();

    let size = child(root, "size").ok_or(ParseError::MissingSize)?;
    let w = number(&doc, size, "width")?;
    let h = number(&doc, size, "height")?;
    if w <= 0.0 || h <= 0.0 || w.fract() != 0.0 || h.fract() != 0.0 || w > u32::MAX as f64 || h > u32::MAX as f64 {
        return Err(ParseError::BadDimensions { line: line_of(&doc, size), width: w as i64, height: h as i64 });
    }
    let (width, height) = (w as u32, h as u32);

    let image_id = child_text(root, "filename")
        .map(|f| Path::new(f).file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned()))
        .unwrap_or_default();

    let mut boxes = Vec::new();
    let mut skipped = 0;
    for obj in root.children().filter(|c| c.is_element() && c.has_tag_name("object")) {
        let name = child_text(obj, "name").unwrap_or("");
        if !CYCLIST_NAMES.iter().any(|n| n.eq_ignore_ascii_case(name)) {
            skipped += 1;
            continue;
        }
        let line = line_of(&doc, obj);
        let bnd = child(obj, "bndbox")
            .ok_or_else(|| ParseError::Field { line, message: "object without <bndbox>".into() })?;
        let (x0, y0) = (number(&doc, bnd, "xmin")?, number(&doc, bnd, "ymin")?);
        let (x1, y1) = (number(&doc, bnd, "xmax")?, number(&doc, bnd, "ymax")?);
        let raw = BoundingBox::new(x0, y0, x1, y1)
            .map_err(|e| ParseError::Field { line: line_of(&doc, bnd), message: e.to_string() })?;
        boxes.push(raw.clip(width as f64, height as f64));
    }
    if skipped > 0 {
        warn!("{image_id}: skipped {skipped} non-cyclist object(s)");
    }

    Ok(ParsedVoc { annotation: ImageAnnotation { image_id, width, height, boxes }, skipped })
}

/// Writes VOC markup. `<filename>` is `<image_id>.ppm`.
pub fn serialize_voc(annot: &ImageAnnotation) -> String {
    serialize_voc_with_ext(annot, "ppm")
}

pub fn serialize_voc_with_ext(annot: &ImageAnnotation, image_ext: &str) -> String {
    let mut s = String::new();
    s.push_str("<annotation>\n");
    let _ = writeln!(s, "  <filename>{}.{}</filename>", xml_escape(&annot.image_id), image_ext);
    let _ = writeln!(
        s,
        "  <size>\n    <width>{}</width>\n    <height>{}</height>\n    <depth>3</depth>\n  </size>",
        annot.width, annot.height
    );
    for b in &annot.boxes {
        let _ = writeln!(
            s,
            "  <object>\n    <name>cyclist</name>\n    <bndbox>\n      <xmin>{}</xmin>\n      <ymin>{}</ymin>\n      <xmax>{}</xmax>\n      <ymax>{}</ymax>\n    </bndbox>\n  </object>",
            b.x_min, b.y_min, b.x_max, b.y_max
        );
    }
    s.push_str("</annotation>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Parses a single annotation file; an empty `<filename>` falls back to the
/// file stem.
pub fn load_voc_file(path: &Path) -> Result<ParsedVoc, ParseError> {
    let bytes = fs::read(path).map_err(|source| ParseError::Io { path: path.to_path_buf(), source })?;
    let mut parsed =
        parse_voc(&bytes).map_err(|e| ParseError::File { path: path.to_path_buf(), source: Box::new(e) })?;
    if parsed.annotation.image_id.is_empty() {
        parsed.annotation.image_id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(parsed)
}

/// Every `*.xml` in `dir`, sorted by file name.
pub fn load_voc_dir(dir: &Path) -> Result<Vec<ImageAnnotation>, ParseError> {
    let entries = fs::read_dir(dir).map_err(|source| ParseError::Io { path: dir.to_path_buf(), source })?;
    let mut paths = Vec::new();
    for e in entries {
        let p = e.map_err(|source| ParseError::Io { path: dir.to_path_buf(), source })?.path();
        if p.extension().is_some_and(|x| x.eq_ignore_ascii_case("xml")) {
            paths.push(p);
        }
    }
    paths.sort();
    paths.iter().map(|p| load_voc_file(p).map(|v| v.annotation)).collect()
}

/// Writes one `<image_id>.xml` per annotation.
pub fn write_voc_dir(dir: &Path, items: &[ImageAnnotation]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for a in items {
        fs::write(dir.join(format!("{}.xml", a.image_id)), serialize_voc(a))?;
    }
    Ok(())
}

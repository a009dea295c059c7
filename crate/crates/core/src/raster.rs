//! 8-bit RGB rasters, row-major, plus PPM and PNG codecs.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("bad PPM data: {0}")]
    Ppm(String),
    #[error("png decode: {0}")]
    PngDecode(#[from] png::DecodingError),
    #[error("png encode: {0}")]
    PngEncode(#[from] png::EncodingError),
    #[error("unsupported image format: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl Raster {
    pub fn new(width: u32, height: u32) -> Self {
        Self { width, height, data: vec![0; width as usize * height as usize * 3] }
    }

    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        let data = rgb.iter().copied().cycle().take(width as usize * height as usize * 3).collect();
        Self { width, height, data }
    }

    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Option<Self> {
        (data.len() == width as usize * height as usize * 3).then_some(Self { width, height, data })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn as_bytes_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        let i = self.offset(x, y);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn put(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let i = self.offset(x, y);
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * 3
    }

    pub fn pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data.chunks_exact(3).map(|c| [c[0], c[1], c[2]])
    }

    pub fn pixels_mut(&mut self) -> impl Iterator<Item = &mut [u8]> + '_ {
        self.data.chunks_exact_mut(3)
    }

    /// Binary PPM (P6, maxval 255).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    /// Decodes P6 or P3 PPM with maxval 255.
    pub fn from_ppm(bytes: &[u8]) -> Result<Self, ImageError> {
        let mut cur = PpmCursor { bytes, pos: 0 };
        let magic = cur.token()?;
        let width: u32 = cur.number()?;
        let height: u32 = cur.number()?;
        let maxval: u32 = cur.number()?;
        if maxval != 255 {
            return Err(ImageError::Ppm(format!("maxval {maxval} unsupported, expected 255")));
        }
        let n = width as usize * height as usize * 3;
        let data = match magic.as_str() {
            "P6" => {
                // exactly one whitespace byte separates the header from the samples
                let start = cur.pos + 1;
                let body = bytes
                    .get(start..start + n)
                    .ok_or_else(|| ImageError::Ppm(format!("truncated: need {n} sample bytes")))?;
                body.to_vec()
            }
            "P3" => {
                let mut v = Vec::with_capacity(n);
                for _ in 0..n {
                    let s: u32 = cur.number()?;
                    if s > 255 {
                        return Err(ImageError::Ppm(format!("sample {s} exceeds maxval")));
                    }
                    v.push(s as u8);
                }
                v
            }
            other => return Err(ImageError::Ppm(format!("unknown magic {other:?}"))),
        };
        Ok(Self { width, height, data })
    }

    pub fn to_png(&self) -> Result<Vec<u8>, ImageError> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header()?;
            w.write_image_data(&self.data)?;
        }
        Ok(out)
    }

    pub fn from_png(bytes: &[u8]) -> Result<Self, ImageError> {
        let mut dec = png::Decoder::new(io::Cursor::new(bytes));
        dec.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
        let mut reader = dec.read_info()?;
        let mut buf = vec![0; reader.output_buffer_size().unwrap_or(0)];
        let info = reader.next_frame(&mut buf)?;
        let px = info.width as usize * info.height as usize;
        let data = match info.color_type {
            png::ColorType::Rgb => buf[..px * 3].to_vec(),
            png::ColorType::Rgba => buf[..px * 4].chunks_exact(4).flat_map(|c| [c[0], c[1], c[2]]).collect(),
            png::ColorType::Grayscale => buf[..px].iter().flat_map(|&g| [g, g, g]).collect(),
            png::ColorType::GrayscaleAlpha => buf[..px * 2].chunks_exact(2).flat_map(|c| [c[0], c[0], c[0]]).collect(),
            png::ColorType::Indexed => return Err(ImageError::Unsupported("unexpanded palette".into())),
        };
        Ok(Self { width: info.width, height: info.height, data })
    }

    /// Loads `.ppm` or `.png` by extension.
    pub fn load(path: &Path) -> Result<Self, ImageError> {
        let bytes = fs::read(path)?;
        match ext_lower(path).as_deref() {
            Some("ppm") | Some("pnm") => Self::from_ppm(&bytes),
            Some("png") => Self::from_png(&bytes),
            other => Err(ImageError::Unsupported(format!("{other:?} ({})", path.display()))),
        }
    }

    /// Saves as `.ppm` or `.png` by extension.
    pub fn save(&self, path: &Path) -> Result<(), ImageError> {
        let bytes = match ext_lower(path).as_deref() {
            Some("ppm") | Some("pnm") => self.to_ppm(),
            Some("png") => self.to_png()?,
            other => return Err(ImageError::Unsupported(format!("{other:?} ({})", path.display()))),
        };
        let mut w = BufWriter::new(fs::File::create(path)?);
        w.write_all(&bytes)?;
        w.flush()?;
        Ok(())
    }
}

fn ext_lower(path: &Path) -> Option<String> {
    path.extension().map(|e| e.to_string_lossy().to_ascii_lowercase())
}

struct PpmCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PpmCursor<'_> {
    fn skip_ws_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<String, ImageError> {
        self.skip_ws_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ImageError::Ppm("unexpected end of header".into()));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<u32, ImageError> {
        let t = self.token()?;
        t.parse().map_err(|_| ImageError::Ppm(format!("expected number, got {t:?}")))
    }
}

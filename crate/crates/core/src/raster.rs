//! Raster images and Netpbm (PBM/PGM/PPM) encoding.
//!
//! Pixel `(x, y)` is column `x`, row `y`, with row 0 at the top of the file.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// A two-level raster. `true` marks channel material.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "image must be at least 1x1, got {width}x{height}"
            )));
        }
        Ok(Self {
            width,
            height,
            data: vec![false; width * height],
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut img = Self::new(width, height)?;
        for y in 0..height {
            for x in 0..width {
                img.data[y * width + x] = f(x, y);
            }
        }
        Ok(img)
    }

    /// Parses rows of `#` (set) and any other character (unset). Handy for
    /// small fixtures.
    pub fn from_ascii(rows: &[&str]) -> Result<Self> {
        let h = rows.len();
        let w = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        Self::from_fn(w, h, |x, y| rows[y].as_bytes().get(x) == Some(&b'#'))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height && self.data[y * self.width + x]
    }

    /// Out-of-range coordinates read as background.
    pub fn get_i(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && self.get(x as usize, y as usize)
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        if x < self.width && y < self.height {
            self.data[y * self.width + x] = v;
        }
    }

    pub fn set_i(&mut self, x: i64, y: i64, v: bool) {
        if x >= 0 && y >= 0 {
            self.set(x as usize, y as usize, v);
        }
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn pixels(&self) -> &[bool] {
        &self.data
    }

    /// Coordinates of the set pixels in raster order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % self.width, i / self.width))
    }

    /// Sizes of the 8-connected components of the set pixels, in raster
    /// order of their first pixel.
    pub fn component_sizes(&self) -> Vec<usize> {
        let (w, h) = (self.width, self.height);
        let mut seen = vec![false; w * h];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for start in 0..w * h {
            if !self.data[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut size = 0;
            while let Some(i) = stack.pop() {
                size += 1;
                let (x, y) = ((i % w) as i64, (i / w) as i64);
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let (nx, ny) = (x + dx, y + dy);
                        if self.get_i(nx, ny) {
                            let j = ny as usize * w + nx as usize;
                            if !seen[j] {
                                seen[j] = true;
                                stack.push(j);
                            }
                        }
                    }
                }
            }
            sizes.push(size);
        }
        sizes
    }

    /// Marks every pixel within Euclidean distance `r` of the segment
    /// `(x0,y0)-(x1,y1)`.
    pub fn draw_thick_line(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, r: f64) {
        let (minx, maxx) = (
            (x0.min(x1) - r).floor() as i64,
            (x0.max(x1) + r).ceil() as i64,
        );
        let (miny, maxy) = (
            (y0.min(y1) - r).floor() as i64,
            (y0.max(y1) + r).ceil() as i64,
        );
        let a = crate::geom::Point2::new(x0, y0);
        let b = crate::geom::Point2::new(x1, y1);
        for y in miny..=maxy {
            for x in minx..=maxx {
                let p = crate::geom::Point2::new(x as f64, y as f64);
                if crate::geom::distance_to_segment(p, a, b) <= r {
                    self.set_i(x, y, true);
                }
            }
        }
    }

    /// 8-connected Bresenham line between pixel centers.
    pub fn draw_line(&mut self, x0: i64, y0: i64, x1: i64, y1: i64) {
        for (x, y) in bresenham(x0, y0, x1, y1) {
            self.set_i(x, y, true);
        }
    }

    pub fn from_gray(img: &GrayImage, invert: bool) -> Self {
        let maxval = u32::from(img.maxval);
        let data = img
            .pixels
            .iter()
            .map(|&v| {
                // Dark (below mid-gray on a 0..=255 scale) is foreground.
                let dark = u32::from(v) * 255 < 128 * maxval;
                dark != invert
            })
            .collect();
        Self {
            width: img.width,
            height: img.height,
            data,
        }
    }

    /// Plain PBM (P1), `1` for set pixels, lines of at most 70 characters.
    pub fn to_pbm(&self) -> Vec<u8> {
        let mut out = format!("P1\n{} {}\n", self.width, self.height).into_bytes();
        for row in self.data.chunks(self.width) {
            for (i, chunk) in row.chunks(35).enumerate() {
                if i > 0 {
                    out.push(b'\n');
                }
                let line: Vec<&str> = chunk.iter().map(|&b| if b { "1" } else { "0" }).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
            }
            out.push(b'\n');
        }
        out
    }

    /// Binary PGM (P5): set pixels black, the rest white.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.data.iter().map(|&b| if b { 0u8 } else { 255u8 }));
        out
    }
}

pub fn bresenham(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<(i64, i64)> {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let (mut x, mut y) = (x0, y0);
    let mut err = dx + dy;
    let mut out = Vec::with_capacity((dx - dy + 1) as usize);
    loop {
        out.push((x, y));
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    out
}

/// Single-channel image as decoded from a Netpbm file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, fill: [u8; 3]) -> Self {
        Self {
            width,
            height,
            data: vec![fill; width * height],
        }
    }

    pub fn put(&mut self, x: i64, y: i64, c: [u8; 3]) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            self.data[y as usize * self.width + x as usize] = c;
        }
    }

    pub fn line(&mut self, x0: i64, y0: i64, x1: i64, y1: i64, c: [u8; 3]) {
        for (x, y) in bresenham(x0, y0, x1, y1) {
            self.put(x, y, c);
        }
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        for px in &self.data {
            out.extend_from_slice(px);
        }
        out
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws_and_comments(&mut self) {
        while self.pos < self.buf.len() {
            match self.buf[self.pos] {
                b'#' => {
                    while self.pos < self.buf.len() && !matches!(self.buf[self.pos], b'\n' | b'\r')
                    {
                        self.pos += 1;
                    }
                }
                b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_ws_and_comments();
        let start = self.pos;
        while self.pos < self.buf.len() && self.buf[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.buf[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse("netpbm", format!("bad {what} at byte {start}")))
    }
}

/// Decodes P1, P2, P4 or P5 into gray levels. Bilevel files map black to 0
/// and white to 1 with `maxval = 1`.
pub fn decode_gray(buf: &[u8]) -> Result<GrayImage> {
    if buf.len() < 2 || buf[0] != b'P' {
        return Err(Error::parse("netpbm", "missing magic number"));
    }
    let kind = buf[1];
    if !matches!(kind, b'1' | b'2' | b'4' | b'5') {
        return Err(Error::parse(
            "netpbm",
            format!("unsupported format P{}", kind as char),
        ));
    }
    let mut c = Cursor { buf, pos: 2 };
    let width = c.number("width")? as usize;
    let height = c.number("height")? as usize;
    if width == 0 || height == 0 {
        return Err(Error::parse("netpbm", "zero image dimension"));
    }
    let n = width
        .checked_mul(height)
        .filter(|n| *n <= 1 << 30)
        .ok_or_else(|| Error::parse("netpbm", "image too large"))?;
    let maxval = if matches!(kind, b'2' | b'5') {
        let m = c.number("maxval")?;
        if m == 0 || m > 65535 {
            return Err(Error::parse("netpbm", format!("maxval {m} out of range")));
        }
        m as u16
    } else {
        1
    };
    let truncated = || Error::parse("netpbm", "truncated pixel data");
    let mut pixels = Vec::with_capacity(n);
    match kind {
        b'1' => {
            // Plain PBM digits need not be whitespace separated.
            while pixels.len() < n {
                c.skip_ws_and_comments();
                match c.buf.get(c.pos) {
                    Some(b'0') => pixels.push(1),
                    Some(b'1') => pixels.push(0),
                    _ => return Err(truncated()),
                }
                c.pos += 1;
            }
        }
        b'2' => {
            for _ in 0..n {
                let v = c.number("sample")?;
                if v > u32::from(maxval) {
                    return Err(Error::parse("netpbm", format!("sample {v} exceeds maxval")));
                }
                pixels.push(v as u16);
            }
        }
        b'4' => {
            c.pos += 1;
            let row_bytes = width.div_ceil(8);
            let data = buf
                .get(c.pos..c.pos + row_bytes * height)
                .ok_or_else(truncated)?;
            for row in data.chunks(row_bytes) {
                for x in 0..width {
                    let bit = (row[x / 8] >> (7 - x % 8)) & 1;
                    pixels.push(u16::from(bit == 0));
                }
            }
        }
        _ => {
            // Exactly one whitespace byte separates the header from the raster.
            c.pos += 1;
            if maxval < 256 {
                let data = buf.get(c.pos..c.pos + n).ok_or_else(truncated)?;
                pixels.extend(data.iter().map(|&b| u16::from(b)));
            } else {
                let data = buf.get(c.pos..c.pos + 2 * n).ok_or_else(truncated)?;
                pixels.extend(data.chunks(2).map(|b| u16::from_be_bytes([b[0], b[1]])));
            }
            if pixels.iter().any(|&v| v > maxval) {
                return Err(Error::parse("netpbm", "sample exceeds maxval"));
            }
        }
    }
    Ok(GrayImage {
        width,
        height,
        maxval,
        pixels,
    })
}

pub fn read_binary_image(path: &Path, invert: bool) -> Result<BinaryImage> {
    let buf = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(BinaryImage::from_gray(&decode_gray(&buf)?, invert))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

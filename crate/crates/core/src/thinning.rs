//! Morphological thinning of binary training images.
//!
//! Two-subiteration thinning in the Zhang–Suen family. With the neighbors of
//! `p` labelled
//!
//! ```text
//!   P9 P2 P3        NW N NE
//!   P8 p  P4   =    W  p E
//!   P7 P6 P5        SW S SE
//! ```
//!
//! a pixel is a deletion candidate in a subiteration when
//!
//! * `2 <= B(p) <= 6`, where `B` counts set neighbors,
//! * `p` is 8-simple (see [`SIMPLE`]),
//! * first subiteration: `P2·P4·P6 = 0` and `P4·P6·P8 = 0`,
//! * second subiteration: `P2·P4·P8 = 0` and `P2·P6·P8 = 0`.
//!
//! Candidates are found on the image as it stood at the start of the
//! subiteration, then deleted one at a time in raster order, each deletion
//! re-checking simplicity on the current image. Deleting only simple points
//! keeps the 8-connected component count; the `B >= 2` test on the snapshot
//! keeps existing line ends. Once no subiteration deletes anything, any 2×2 block
//! left behind loses its first simple pixel and thinning resumes; the output is
//! a fixed point of the whole procedure, so thinning is idempotent.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::raster::BinaryImage;

/// Neighbor offsets in ring order N, NE, E, SE, S, SW, W, NW (bit 0 .. 7 of
/// a neighborhood mask). `dy` grows downwards.
pub const RING: [(i64, i64); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

const N: u8 = 1 << 0;
const E: u8 = 1 << 2;
const S: u8 = 1 << 4;
const W: u8 = 1 << 6;

/// `SIMPLE[mask]` is true when deleting the center pixel leaves the topology
/// unchanged: the set neighbors form exactly one 8-connected component, and
/// the unset neighbors form exactly one 4-connected component that touches a
/// 4-neighbor of the center. Adjacency is taken inside the 3×3 window.
pub static SIMPLE: [bool; 256] = build_simple_table();

const fn build_simple_table() -> [bool; 256] {
    let mut table = [false; 256];
    let mut m = 0;
    while m < 256 {
        table[m] = is_simple_mask(m as u8);
        m += 1;
    }
    table
}

const fn adjacent(i: usize, j: usize, eight: bool) -> bool {
    let (ax, ay) = RING[i];
    let (bx, by) = RING[j];
    let dx = (ax - bx).abs();
    let dy = (ay - by).abs();
    if eight {
        dx <= 1 && dy <= 1 && dx + dy > 0
    } else {
        dx + dy == 1
    }
}

/// Counts components of ring positions whose bit equals `want`, under 8- or
/// 4-adjacency. With `touch_4` only components containing N, E, S or W count.
const fn count_components(mask: u8, want: bool, eight: bool, touch_4: bool) -> u32 {
    let mut label = [0u8; 8];
    let mut count = 0u32;
    let mut next = 1u8;
    let mut i = 0;
    while i < 8 {
        let set = (mask >> i) & 1 == 1;
        if set == want && label[i] == 0 {
            // flood fill from i
            label[i] = next;
            let mut changed = true;
            while changed {
                changed = false;
                let mut a = 0;
                while a < 8 {
                    if label[a] == next {
                        let mut b = 0;
                        while b < 8 {
                            let bset = (mask >> b) & 1 == 1;
                            if bset == want && label[b] == 0 && adjacent(a, b, eight) {
                                label[b] = next;
                                changed = true;
                            }
                            b += 1;
                        }
                    }
                    a += 1;
                }
            }
            let mut touches = !touch_4;
            let mut k = 0;
            while k < 8 {
                if label[k] == next && k % 2 == 0 {
                    touches = true;
                }
                k += 1;
            }
            if touches {
                count += 1;
            }
            next += 1;
        }
        i += 1;
    }
    count
}

const fn is_simple_mask(mask: u8) -> bool {
    count_components(mask, true, true, false) == 1
        && count_components(mask, false, false, true) == 1
}

/// The one-pixel-wide thinned form of a training image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelSkeleton {
    pixels: BinaryImage,
}

impl PixelSkeleton {
    /// Wraps an already thin bitmap (for example a hand-drawn fixture).
    pub fn from_bitmap(pixels: BinaryImage) -> Self {
        Self { pixels }
    }

    pub fn bitmap(&self) -> &BinaryImage {
        &self.pixels
    }

    pub fn into_bitmap(self) -> BinaryImage {
        self.pixels
    }

    pub fn width(&self) -> usize {
        self.pixels.width()
    }

    pub fn height(&self) -> usize {
        self.pixels.height()
    }

    pub fn get(&self, x: i64, y: i64) -> bool {
        self.pixels.get_i(x, y)
    }

    /// Number of set 8-neighbors of `(x, y)`.
    pub fn neighbor_count(&self, x: i64, y: i64) -> usize {
        RING.iter()
            .filter(|(dx, dy)| self.get(x + dx, y + dy))
            .count()
    }

    /// Violated skeleton invariants relative to `source`; empty when the
    /// skeleton is a connectivity-preserving, one-pixel-wide subset.
    pub fn check_against(&self, source: &BinaryImage) -> Vec<String> {
        let mut out = Vec::new();
        if (self.width(), self.height()) != (source.width(), source.height()) {
            out.push("raster shape differs from source".into());
            return out;
        }
        if self.pixels.foreground().any(|(x, y)| !source.get(x, y)) {
            out.push("skeleton pixel outside source foreground".into());
        }
        let (a, b) = (
            self.pixels.component_sizes().len(),
            source.component_sizes().len(),
        );
        if a != b {
            out.push(format!("{a} components, source has {b}"));
        }
        if let Some((x, y)) = first_2x2_block(&self.pixels) {
            out.push(format!("2x2 block at ({x},{y})"));
        }
        out
    }
}

pub(crate) fn mask_at(img: &BinaryImage, x: usize, y: usize) -> u8 {
    let (x, y) = (x as i64, y as i64);
    let mut m = 0u8;
    for (i, (dx, dy)) in RING.iter().enumerate() {
        if img.get_i(x + dx, y + dy) {
            m |= 1 << i;
        }
    }
    m
}

fn is_candidate(m: u8, second: bool) -> bool {
    let b = m.count_ones();
    if !(2..=6).contains(&b) || !SIMPLE[m as usize] {
        return false;
    }
    let all = |bits: u8| m & bits == bits;
    if second {
        !all(N | E | W) && !all(N | S | W)
    } else {
        !all(N | E | S) && !all(E | S | W)
    }
}

fn candidates(img: &BinaryImage, second: bool) -> Vec<(usize, usize)> {
    let w = img.width();
    (0..img.height())
        .into_par_iter()
        .flat_map_iter(|y| {
            (0..w)
                .filter(move |&x| img.get(x, y) && is_candidate(mask_at(img, x, y), second))
                .map(move |x| (x, y))
        })
        .collect()
}

fn first_2x2_block(img: &BinaryImage) -> Option<(usize, usize)> {
    for y in 0..img.height().saturating_sub(1) {
        for x in 0..img.width().saturating_sub(1) {
            if img.get(x, y) && img.get(x + 1, y) && img.get(x, y + 1) && img.get(x + 1, y + 1) {
                return Some((x, y));
            }
        }
    }
    None
}

fn zhang_suen_pass(img: &mut BinaryImage) -> bool {
    let mut any = false;
    loop {
        let mut changed = false;
        for second in [false, true] {
            for (x, y) in candidates(img, second) {
                if SIMPLE[mask_at(img, x, y) as usize] {
                    img.set(x, y, false);
                    changed = true;
                }
            }
        }
        if !changed {
            return any;
        }
        any = true;
    }
}

/// Removes one simple pixel from every 2×2 block that has one.
fn break_blocks(img: &mut BinaryImage) -> bool {
    let mut removed = false;
    for y in 0..img.height().saturating_sub(1) {
        for x in 0..img.width().saturating_sub(1) {
            let block = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)];
            if !block.iter().all(|&(bx, by)| img.get(bx, by)) {
                continue;
            }
            if let Some(&(bx, by)) = block
                .iter()
                .find(|&&(bx, by)| SIMPLE[mask_at(img, bx, by) as usize])
            {
                img.set(bx, by, false);
                removed = true;
            }
        }
    }
    removed
}

/// Thins `img` to a one-pixel-wide skeleton with the same 8-connected
/// components.
pub fn thin(img: &BinaryImage) -> Result<PixelSkeleton> {
    if img.count() == 0 {
        return Err(Error::InvalidInput("image has no foreground pixels".into()));
    }
    let mut cur = img.clone();
    loop {
        zhang_suen_pass(&mut cur);
        if !break_blocks(&mut cur) {
            break;
        }
    }
    Ok(PixelSkeleton { pixels: cur })
}

/// Branch and end pixels of a skeleton, in raster order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PixelClasses {
    pub branch_points: Vec<(usize, usize)>,
    pub end_points: Vec<(usize, usize)>,
}

/// End points have exactly one set 8-neighbor, branch points three or more.
pub fn classify_pixels(ps: &PixelSkeleton) -> PixelClasses {
    let mut out = PixelClasses::default();
    for (x, y) in ps.bitmap().foreground() {
        match ps.neighbor_count(x as i64, y as i64) {
            1 => out.end_points.push((x, y)),
            n if n >= 3 => out.branch_points.push((x, y)),
            _ => {}
        }
    }
    out
}

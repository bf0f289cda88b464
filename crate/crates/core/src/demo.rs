//! Synthetic binary images: simple shapes for tests and a branching
//! training image for the demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::Point2;
use crate::raster::BinaryImage;

pub fn blank(width: usize, height: usize) -> BinaryImage {
    BinaryImage::new(width, height).expect("non-zero image size")
}

/// Horizontal bar `w` pixels wide and `h` tall, centered.
pub fn bar(width: usize, height: usize, w: usize, h: usize) -> BinaryImage {
    let (x0, y0) = ((width - w) / 2, (height - h) / 2);
    BinaryImage::from_fn(width, height, |x, y| {
        (x0..x0 + w).contains(&x) && (y0..y0 + h).contains(&y)
    })
    .expect("non-zero image size")
}

pub fn disk(size: usize, r: f64) -> BinaryImage {
    let c = (size as f64 - 1.0) / 2.0;
    BinaryImage::from_fn(size, size, |x, y| {
        let (dx, dy) = (x as f64 - c, y as f64 - c);
        dx * dx + dy * dy <= r * r
    })
    .expect("non-zero image size")
}

/// A Y with arms of the given thickness radius; the tail points down.
pub fn y_shape(size: usize, r: f64) -> BinaryImage {
    let mut img = blank(size, size);
    let s = size as f64;
    let j = (0.5 * s, 0.45 * s);
    img.draw_thick_line(0.5 * s, 0.9 * s, j.0, j.1, r);
    img.draw_thick_line(j.0, j.1, 0.15 * s, 0.1 * s, r);
    img.draw_thick_line(j.0, j.1, 0.85 * s, 0.1 * s, r);
    img
}

pub fn plus_shape(size: usize, r: f64) -> BinaryImage {
    let mut img = blank(size, size);
    let (a, b, c) = (0.1 * size as f64, 0.5 * size as f64, 0.9 * size as f64);
    img.draw_thick_line(a, b, c, b, r);
    img.draw_thick_line(b, a, b, c, r);
    img
}

/// Random branching tree drawn with thick strokes, grown upward from the
/// bottom center. Returns the image and the trunk's base pixel.
pub fn random_tree(size: usize, depth: u32, r: f64, seed: u64) -> (BinaryImage, (usize, usize)) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut img = blank(size, size);
    let s = size as f64;
    let base = Point2::new(0.5 * s, s - 1.0 - r.ceil());
    let mut stack = vec![(base, -std::f64::consts::FRAC_PI_2, 0.28 * s, depth)];
    while let Some((p, heading, len, d)) = stack.pop() {
        let q = p + Point2::from_angle(heading) * len;
        let q = Point2::new(
            q.x.clamp(r + 1.0, s - r - 2.0),
            q.y.clamp(r + 1.0, s - r - 2.0),
        );
        img.draw_thick_line(p.x, p.y, q.x, q.y, r);
        if d > 0 {
            let spread = rng.gen_range(0.35..0.7);
            let shrink = rng.gen_range(0.6..0.8);
            stack.push((q, heading - spread, len * shrink, d - 1));
            stack.push((q, heading + spread, len * shrink, d - 1));
        }
    }
    (img, (base.x.round() as usize, base.y.round() as usize))
}

/// The bundled training tree (write it with [`BinaryImage::to_pgm`] for
/// dark channels on white). Returns the image and the pixel where the
/// trunk enters.
pub fn training_image() -> (BinaryImage, (usize, usize)) {
    let size = 256;
    let mut img = blank(size, size);
    // Fixed branches (x0, y0, x1, y1) in pixels, trunk first.
    let strokes: [(f64, f64, f64, f64); 15] = [
        (128.0, 250.0, 128.0, 190.0),
        (128.0, 190.0, 88.0, 140.0),
        (128.0, 190.0, 172.0, 146.0),
        (88.0, 140.0, 52.0, 104.0),
        (88.0, 140.0, 100.0, 86.0),
        (172.0, 146.0, 154.0, 96.0),
        (172.0, 146.0, 214.0, 112.0),
        (52.0, 104.0, 24.0, 66.0),
        (52.0, 104.0, 58.0, 52.0),
        (100.0, 86.0, 84.0, 36.0),
        (100.0, 86.0, 126.0, 40.0),
        (154.0, 96.0, 148.0, 30.0),
        (154.0, 96.0, 184.0, 52.0),
        (214.0, 112.0, 206.0, 60.0),
        (214.0, 112.0, 240.0, 80.0),
    ];
    for (x0, y0, x1, y1) in strokes {
        img.draw_thick_line(x0, y0, x1, y1, 2.5);
    }
    (img, (128, 250))
}

/// Named test corpus: bars, disks, Y and plus shapes at several sizes,
/// and random dilated trees up to 256 x 256.
pub fn corpus() -> Vec<(String, BinaryImage)> {
    let mut out = Vec::new();
    for (w, h) in [(3, 1), (20, 3), (60, 7), (120, 15)] {
        out.push((format!("bar_{w}x{h}"), bar(w + 8, h + 8, w, h)));
    }
    for r in [2.0, 6.5, 15.0, 40.0] {
        out.push((format!("disk_r{r}"), disk((2.0 * r) as usize + 6, r)));
    }
    for (size, r) in [(40, 1.5), (96, 3.0), (200, 6.0)] {
        out.push((format!("y_{size}_r{r}"), y_shape(size, r)));
        out.push((format!("plus_{size}_r{r}"), plus_shape(size, r)));
    }
    for (i, (size, depth, r)) in [
        (64, 2, 1.5),
        (128, 3, 2.0),
        (128, 4, 3.0),
        (192, 4, 2.5),
        (256, 5, 3.0),
        (256, 6, 4.0),
    ]
    .into_iter()
    .enumerate()
    {
        out.push((
            format!("tree_{size}_d{depth}"),
            random_tree(size, depth, r, i as u64 + 1).0,
        ));
    }
    out.push(("training_tree".into(), training_image().0));
    out
}

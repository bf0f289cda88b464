//! Quick-look PPM rendering of a skeleton, optionally over its region.

use crate::geom::Point2;
use crate::raster::RgbImage;
use crate::region::RegionBoundary;
use crate::skeleton::Skeleton;

const WHITE: [u8; 3] = [255, 255, 255];
const BLACK: [u8; 3] = [0, 0, 0];
const REGION: [u8; 3] = [225, 225, 225];
const ROOT: [u8; 3] = [220, 30, 30];

/// Renders with the longer side of the bounding box mapped to `size`
/// pixels, y pointing up.
pub fn render(sk: &Skeleton, region: Option<&RegionBoundary>, size: usize) -> RgbImage {
    let size = size.max(16);
    let pts = sk.nodes().iter().map(|n| n.p);
    let (mut lo, mut hi) = pts.fold(
        (
            Point2::new(f64::INFINITY, f64::INFINITY),
            Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), p| {
            (
                Point2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        },
    );
    if let Some(r) = region {
        let (a, b) = r.bounds();
        lo = Point2::new(lo.x.min(a.x), lo.y.min(a.y));
        hi = Point2::new(hi.x.max(b.x), hi.y.max(b.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let margin = 4.0;
    let scale = (size as f64 - 2.0 * margin) / span;
    let w = ((hi.x - lo.x) * scale + 2.0 * margin).ceil() as usize + 1;
    let h = ((hi.y - lo.y) * scale + 2.0 * margin).ceil() as usize + 1;
    let to_px = |p: Point2| {
        let x = (p.x - lo.x) * scale + margin;
        let y = h as f64 - 1.0 - ((p.y - lo.y) * scale + margin);
        (x.round() as i64, y.round() as i64)
    };
    let to_world = |x: usize, y: usize| {
        Point2::new(
            (x as f64 - margin) / scale + lo.x,
            (h as f64 - 1.0 - y as f64 - margin) / scale + lo.y,
        )
    };

    let mut img = RgbImage::new(w, h, WHITE);
    if let Some(r) = region {
        for y in 0..h {
            for x in 0..w {
                if r.contains(to_world(x, y)) {
                    img.data[y * w + x] = REGION;
                }
            }
        }
    }
    for e in sk.edges() {
        let (a, b) = sk.segment(e.id);
        let (pa, pb) = (to_px(a), to_px(b));
        img.line(pa.0, pa.1, pb.0, pb.1, BLACK);
    }
    let (rx, ry) = to_px(sk.node(sk.root()).p);
    for dy in -2..=2 {
        for dx in -2..=2 {
            img.put(rx + dx, ry + dy, ROOT);
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_edges_region_and_root() {
        let mut sk = Skeleton::with_root(Point2::new(1.0, 1.0), Point2::new(1.0, 0.0), 2).unwrap();
        let s = sk.add_node(Point2::new(9.0, 1.0));
        sk.add_edge(sk.root(), s).unwrap();
        sk.recompute_marks();
        let region = RegionBoundary::rectangle(0.0, 0.0, 10.0, 10.0).unwrap();
        let img = render(&sk, Some(&region), 100);
        assert!(img.width <= 101 && img.height <= 101);
        assert!(img.data.contains(&BLACK));
        assert!(img.data.contains(&REGION));
        assert!(img.data.contains(&ROOT));
        assert!(img.to_ppm().starts_with(b"P6\n"));
    }
}

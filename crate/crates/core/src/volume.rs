//! Channel volumes and the labeled voxel grid.
//!
//! A channel system is the union, over skeleton edges, of half-elliptic
//! troughs swept along each edge: a point at horizontal distance `t` from
//! the edge is inside when `t <= w` and `-d * sqrt(1 - (t/w)^2) <= z <= 0`.
//! Every trough contains its own top, so within one column the union is a
//! single interval `[-depth(x, y), 0]`, with `depth` the largest trough
//! depth over the column. The rasterizer works column by column on that
//! basis.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{distance_to_segment, Point2, Point3};
use crate::lobe::Lobe;
use crate::raster::{write_file, RgbImage};
use crate::skeleton::Skeleton;

pub const BACKGROUND: u8 = 0;
pub const LOBE: u8 = 1;
pub const CHANNEL: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub half_width: f64,
    pub depth: f64,
    /// Size multiplier per edge generation; 1 keeps every edge the same.
    #[serde(default = "one")]
    pub taper: f64,
}

fn one() -> f64 {
    1.0
}

impl ChannelParams {
    pub fn new(half_width: f64, depth: f64) -> Self {
        Self {
            half_width,
            depth,
            taper: 1.0,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.half_width > 0.0
            && self.depth > 0.0
            && self.half_width.is_finite()
            && self.depth.is_finite())
        {
            return Err(Error::InvalidArgument(format!(
                "channel half width and depth must be positive, got {} and {}",
                self.half_width, self.depth
            )));
        }
        if !(self.taper > 0.0 && self.taper <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "taper must lie in (0, 1], got {}",
                self.taper
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Trough {
    a: Point2,
    b: Point2,
    w: f64,
    d: f64,
    lo: Point2,
    hi: Point2,
}

/// The swept solid of one skeleton, ready for membership queries.
#[derive(Debug, Clone)]
pub struct ChannelVolume {
    troughs: Vec<Trough>,
}

impl ChannelVolume {
    pub fn new(sk: &Skeleton, cp: &ChannelParams) -> Result<Self> {
        cp.check()?;
        let gens = sk.edge_generations();
        let troughs = sk
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = sk.segment(e.id);
                let g = gens[e.id.0].min(i32::MAX as u32) as i32;
                let f = cp.taper.powi(g);
                let (w, d) = (cp.half_width * f, cp.depth * f);
                Trough {
                    a,
                    b,
                    w,
                    d,
                    lo: Point2::new(a.x.min(b.x) - w, a.y.min(b.y) - w),
                    hi: Point2::new(a.x.max(b.x) + w, a.y.max(b.y) + w),
                }
            })
            .collect();
        Ok(Self { troughs })
    }

    /// Depth of the union below `z = 0` over the column at `p`, if any
    /// trough covers it.
    pub fn column_depth(&self, p: Point2) -> Option<f64> {
        let mut best: Option<f64> = None;
        for tr in &self.troughs {
            if p.x < tr.lo.x || p.y < tr.lo.y || p.x > tr.hi.x || p.y > tr.hi.y {
                continue;
            }
            let t = distance_to_segment(p, tr.a, tr.b);
            if t <= tr.w {
                let r = t / tr.w;
                let depth = tr.d * (1.0 - r * r).max(0.0).sqrt();
                best = Some(best.map_or(depth, |b: f64| b.max(depth)));
            }
        }
        best
    }

    pub fn contains(&self, q: Point3) -> bool {
        q.z <= 0.0 && self.column_depth(q.xy()).is_some_and(|d| q.z >= -d)
    }

    /// Membership after dropping the system onto the lobe's top surface.
    /// Columns outside the lobe outline are empty.
    pub fn contains_projected(&self, lobe: &Lobe, q: Point3) -> bool {
        let local = lobe.to_local(q.xy());
        if !lobe.outline_contains(q.xy()) {
            return false;
        }
        let top = lobe.top_local(local.x, local.y);
        self.contains(Point3::new(q.x, q.y, q.z - top))
    }
}

pub fn point_in_channel(sk: &Skeleton, cp: &ChannelParams, q: Point3) -> Result<bool> {
    Ok(ChannelVolume::new(sk, cp)?.contains(q))
}

/// Axis-aligned grid of cubic cells. `origin` is the minimum corner; cell
/// `(i, j, k)` has its center at `origin + (i + 1/2, j + 1/2, k + 1/2) * spacing`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Point3,
    pub spacing: f64,
    pub dims: [usize; 3],
}

impl GridSpec {
    pub fn new(origin: Point3, spacing: f64, dims: [usize; 3]) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) || dims.iter().any(|&n| n == 0) {
            return Err(Error::InvalidArgument(format!(
                "grid needs positive spacing and dims, got {spacing} and {dims:?}"
            )));
        }
        Ok(Self {
            origin,
            spacing,
            dims,
        })
    }

    /// The smallest uniform spacing for which `dims` cells cover the box,
    /// centered on it.
    pub fn fit(lo: Point3, hi: Point3, dims: [usize; 3]) -> Result<Self> {
        let ext = [hi.x - lo.x, hi.y - lo.y, hi.z - lo.z];
        let spacing = (0..3)
            .map(|a| ext[a] / dims[a].max(1) as f64)
            .fold(0.0, f64::max);
        if spacing <= 0.0 {
            return Err(Error::InvalidArgument("grid box has no extent".into()));
        }
        let pad = |a: usize| 0.5 * (dims[a] as f64 * spacing - ext[a]);
        let origin = Point3::new(lo.x - pad(0), lo.y - pad(1), lo.z - pad(2));
        Self::new(origin, spacing, dims)
    }

    /// Cells of size `spacing` covering the box.
    pub fn covering(lo: Point3, hi: Point3, spacing: f64) -> Result<Self> {
        let n = |a: f64, b: f64| (((b - a) / spacing).ceil() as usize).max(1);
        Self::new(lo, spacing, [n(lo.x, hi.x), n(lo.y, hi.y), n(lo.z, hi.z)])
    }

    pub fn cell_count(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn center(&self, i: usize, j: usize, k: usize) -> Point3 {
        let s = self.spacing;
        Point3::new(
            self.origin.x + (i as f64 + 0.5) * s,
            self.origin.y + (j as f64 + 0.5) * s,
            self.origin.z + (k as f64 + 0.5) * s,
        )
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGrid3 {
    pub spec: GridSpec,
    labels: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    dims: [usize; 3],
    origin: [f64; 3],
    spacing: f64,
    labels: String,
    order: String,
}

impl LabeledGrid3 {
    pub fn new(spec: GridSpec) -> Self {
        Self {
            spec,
            labels: vec![BACKGROUND; spec.cell_count()],
        }
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u8 {
        self.labels[self.spec.index(i, j, k)]
    }

    pub fn count(&self, label: u8) -> usize {
        self.labels.iter().filter(|&&v| v == label).count()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spec.spacing.powi(3)
    }

    /// Cellwise maximum, so channel wins over lobe and lobe over background.
    pub fn merge_max(&mut self, other: &LabeledGrid3) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::InvalidArgument(
                "cannot merge grids with different specs".into(),
            ));
        }
        for (a, b) in self.labels.iter_mut().zip(&other.labels) {
            *a = (*a).max(*b);
        }
        Ok(())
    }

    pub fn header_json(&self) -> String {
        let s = &self.spec;
        let h = Header {
            dims: s.dims,
            origin: [s.origin.x, s.origin.y, s.origin.z],
            spacing: s.spacing,
            labels: "uint8".into(),
            order: "x-fastest".into(),
        };
        serde_json::to_string_pretty(&h).expect("header serialize") + "\n"
    }

    /// Writes `<stem>.json` and `<stem>.raw`, returning both paths.
    pub fn write(&self, stem: &Path) -> Result<(PathBuf, PathBuf)> {
        let json = stem.with_extension("json");
        let raw = stem.with_extension("raw");
        write_file(&json, self.header_json().as_bytes())?;
        write_file(&raw, &self.labels)?;
        Ok((json, raw))
    }

    pub fn read(stem: &Path) -> Result<Self> {
        let json = stem.with_extension("json");
        let raw = stem.with_extension("raw");
        let text = std::fs::read_to_string(&json).map_err(|e| Error::io(&json, e))?;
        let h: Header =
            serde_json::from_str(&text).map_err(|e| Error::parse("grid header", e.to_string()))?;
        if h.labels != "uint8" || h.order != "x-fastest" {
            return Err(Error::parse(
                "grid header",
                "only uint8 x-fastest grids are supported",
            ));
        }
        let spec = GridSpec::new(
            Point3::new(h.origin[0], h.origin[1], h.origin[2]),
            h.spacing,
            h.dims,
        )?;
        let labels = std::fs::read(&raw).map_err(|e| Error::io(&raw, e))?;
        if labels.len() != spec.cell_count() {
            return Err(Error::parse(
                "grid raw",
                format!(
                    "expected {} bytes, found {}",
                    spec.cell_count(),
                    labels.len()
                ),
            ));
        }
        if labels.iter().any(|&v| v > CHANNEL) {
            return Err(Error::parse("grid raw", "label values must be 0, 1 or 2"));
        }
        Ok(Self { spec, labels })
    }

    /// Renders one axis-aligned slice. `axis` is 0, 1 or 2 for x, y, z.
    /// The image's vertical axis is the slice's second axis, drawn upward.
    pub fn slice_ppm(&self, axis: usize, index: usize) -> Result<Vec<u8>> {
        let [nx, ny, nz] = self.spec.dims;
        let (w, h) = match axis {
            0 => (ny, nz),
            1 => (nx, nz),
            2 => (nx, ny),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "axis must be 0, 1 or 2, got {axis}"
                )))
            }
        };
        if index >= self.spec.dims[axis] {
            return Err(Error::InvalidArgument(format!(
                "slice {index} out of range for axis {axis} with {} cells",
                self.spec.dims[axis]
            )));
        }
        let mut img = RgbImage::new(w, h, [255, 255, 255]);
        for v in 0..h {
            for u in 0..w {
                let (i, j, k) = match axis {
                    0 => (index, u, v),
                    1 => (u, index, v),
                    _ => (u, v, index),
                };
                let c = match self.get(i, j, k) {
                    LOBE => [230, 200, 120],
                    CHANNEL => [40, 70, 160],
                    _ => continue,
                };
                img.put(u as i64, (h - 1 - v) as i64, c);
            }
        }
        Ok(img.to_ppm())
    }
}

/// Adds one lobe and its channel systems to `grid` (cellwise maximum).
pub fn rasterize_into(grid: &mut LabeledGrid3, lobe: &Lobe, systems: &[ChannelVolume]) {
    let spec = grid.spec;
    let [nx, ny, nz] = spec.dims;
    // Per column: lobe bottom, channel interval, or nothing.
    let columns: Vec<Option<(f64, f64, f64, Option<f64>)>> = (0..nx * ny)
        .into_par_iter()
        .map(|c| {
            let (i, j) = (c % nx, c / nx);
            let p = spec.center(i, j, 0).xy();
            if !lobe.outline_contains(p) {
                return None;
            }
            let q = lobe.to_local(p);
            let depth = systems
                .iter()
                .filter_map(|s| s.column_depth(p))
                .reduce(f64::max);
            Some((q.x, q.y, lobe.top_local(q.x, q.y), depth))
        })
        .collect();
    grid.labels
        .par_chunks_mut(nx * ny)
        .enumerate()
        .for_each(|(k, slab)| {
            let z = spec.center(0, 0, k).z;
            for (c, col) in columns.iter().enumerate() {
                let Some((x, y, top, depth)) = *col else {
                    continue;
                };
                if !lobe.contains_local(x, y, z) {
                    continue;
                }
                let zs = z - top;
                let label = if depth.is_some_and(|d| zs <= 0.0 && zs >= -d) {
                    CHANNEL
                } else {
                    LOBE
                };
                slab[c] = slab[c].max(label);
            }
        });
    debug_assert_eq!(grid.labels.len(), nx * ny * nz);
}

/// Warnings for channels too narrow or shallow to resolve at this spacing.
pub fn resolution_warnings(spec: &GridSpec, channels: &[ChannelParams]) -> Vec<String> {
    channels
        .iter()
        .filter(|c| spec.spacing > c.half_width.min(c.depth))
        .map(|c| {
            format!(
                "grid spacing {} exceeds channel size min(w_c = {}, d_c = {}); channels may vanish",
                spec.spacing, c.half_width, c.depth
            )
        })
        .collect()
}

/// Labels one lobe and its channel systems on a fresh grid. Returns the
/// grid and any resolution warnings.
pub fn rasterize(
    lobe: &Lobe,
    systems: &[(&Skeleton, ChannelParams)],
    spec: GridSpec,
) -> Result<(LabeledGrid3, Vec<String>)> {
    let vols = systems
        .iter()
        .map(|(sk, cp)| ChannelVolume::new(sk, cp))
        .collect::<Result<Vec<_>>>()?;
    let mut grid = LabeledGrid3::new(spec);
    rasterize_into(&mut grid, lobe, &vols);
    let params: Vec<ChannelParams> = systems.iter().map(|(_, c)| *c).collect();
    Ok((grid, resolution_warnings(&spec, &params)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, SQRT_2};

    use super::*;
    use crate::lobe::{LobeParams, TopMode};

    fn straight(x0: f64, x1: f64, y: f64) -> Skeleton {
        let mut sk = Skeleton::with_root(Point2::new(x0, y), Point2::new(1.0, 0.0), 2).unwrap();
        let s = sk.add_node(Point2::new(x1, y));
        sk.add_edge(sk.root(), s).unwrap();
        sk.recompute_marks();
        sk
    }

    #[test]
    fn channel_membership() {
        let sk = straight(0.0, 10.0, 0.0);
        let cp = ChannelParams::new(2.0, 1.0);
        let e = 1e-9;
        assert!(point_in_channel(&sk, &cp, Point3::new(5.0, 0.0, -0.5)).unwrap());
        assert!(!point_in_channel(&sk, &cp, Point3::new(5.0, 2.0 + e, 0.0)).unwrap());
        assert!(!point_in_channel(&sk, &cp, Point3::new(5.0, 0.0, e)).unwrap());
        let t = 2.0 / SQRT_2;
        assert!(point_in_channel(&sk, &cp, Point3::new(5.0, t, -1.0 / SQRT_2 + 1e-9)).unwrap());
        assert!(!point_in_channel(&sk, &cp, Point3::new(5.0, t, -1.0 / SQRT_2 - 1e-9)).unwrap());
        // Rounded cap past the end node.
        assert!(point_in_channel(&sk, &cp, Point3::new(11.0, 0.0, -0.5)).unwrap());
        assert!(!point_in_channel(&sk, &cp, Point3::new(12.5, 0.0, -0.1)).unwrap());
        assert!(ChannelParams::new(0.0, 1.0).check().is_err());
    }

    #[test]
    fn taper_shrinks_later_generations() {
        let mut sk = straight(0.0, 10.0, 0.0);
        let s2 = sk.add_node(Point2::new(20.0, 0.0));
        sk.add_edge(crate::skeleton::NodeId(1), s2).unwrap();
        sk.recompute_marks();
        let cp = ChannelParams {
            half_width: 2.0,
            depth: 1.0,
            taper: 0.5,
        };
        let v = ChannelVolume::new(&sk, &cp).unwrap();
        assert_eq!(v.column_depth(Point2::new(5.0, 0.0)), Some(1.0));
        assert_eq!(v.column_depth(Point2::new(15.0, 0.0)), Some(0.5));
        assert_eq!(v.column_depth(Point2::new(15.0, 1.5)), None);
    }

    fn lobe(mode: TopMode) -> Lobe {
        let mut p = LobeParams::new(100.0, 40.0, 10.0);
        p.top_mode = mode;
        p.relief = 0.8;
        Lobe::build(&p).unwrap()
    }

    #[test]
    fn projection() {
        let sk = straight(5.0, 95.0, 0.0);
        let cp = ChannelParams::new(3.0, 2.0);
        let v = ChannelVolume::new(&sk, &cp).unwrap();
        let flat = lobe(TopMode::Flat);
        let mounded = lobe(TopMode::Mounded);
        for i in 0..200 {
            let q = Point3::new(
                5.0 + i as f64 * 0.45,
                (i % 13) as f64 * 0.4 - 2.4,
                -(i % 7) as f64 * 0.33,
            );
            assert_eq!(v.contains_projected(&flat, q), v.contains(q));
            if q.y == 0.0 {
                assert_eq!(v.contains_projected(&mounded, q), v.contains(q));
            }
            if flat.outline_contains(q.xy()) {
                let top = mounded.top_surface(q.xy()).unwrap();
                let shifted = Point3::new(q.x, q.y, q.z + top);
                assert_eq!(v.contains_projected(&mounded, shifted), v.contains(q));
            }
        }
        // Margin column: the top drops below zero and the channel moves with it.
        let m = &mounded;
        let x = 50.0;
        let p = Point2::new(x, m.w(x) * 0.95);
        let sk2 = straight(5.0, 95.0, p.y);
        let v2 = ChannelVolume::new(&sk2, &cp).unwrap();
        let top = m.top_surface(p).unwrap();
        assert!(top < 0.0);
        assert!(v2.contains_projected(m, Point3::new(p.x, p.y, top)));
        assert!(!v2.contains_projected(m, Point3::new(p.x, p.y, top + 1e-9)));
    }

    #[test]
    fn straight_channel_volume() {
        let l = lobe(TopMode::Flat);
        let (wc, dc) = (4.0, 2.0);
        let sk = straight(20.0, 80.0, 0.0);
        let spacing = wc / 8.0;
        let spec = GridSpec::covering(
            Point3::new(0.0, -20.0, -10.0),
            Point3::new(100.0, 20.0, 0.0),
            spacing,
        )
        .unwrap();
        let (g, warn) = rasterize(&l, &[(&sk, ChannelParams::new(wc, dc))], spec).unwrap();
        assert!(warn.is_empty());
        // Rounded caps add a half ellipsoid of revolution-like solid at each end:
        // two quarter-ellipsoids = (2/3) pi wc^2 dc / 2 * 2.
        let body = PI / 2.0 * wc * dc * 60.0;
        let caps = 2.0 / 3.0 * PI * wc * wc * dc;
        let vol = g.count(CHANNEL) as f64 * g.cell_volume();
        assert!(
            (vol - (body + caps)).abs() / (body + caps) < 0.05,
            "{vol} vs {}",
            body + caps
        );
    }

    #[test]
    fn channels_stay_inside_the_lobe() {
        let l = lobe(TopMode::Mounded);
        // Very wide channel along the axis overhangs the toe.
        let sk = straight(1.0, 99.0, 0.0);
        let spec = GridSpec::fit(l.bounds().0, l.bounds().1, [64, 32, 16]).unwrap();
        let (g, warn) = rasterize(&l, &[(&sk, ChannelParams::new(30.0, 6.0))], spec).unwrap();
        assert!(warn.is_empty());
        let (lobe_only, _) = rasterize(&l, &[], spec).unwrap();
        assert!(g.count(CHANNEL) > 0);
        for (a, b) in g.labels().iter().zip(lobe_only.labels()) {
            if *a == CHANNEL {
                assert_eq!(*b, LOBE);
            } else {
                assert_eq!(a, b);
            }
        }
        let coarse = GridSpec::fit(l.bounds().0, l.bounds().1, [8, 4, 2]).unwrap();
        let (_, warn) = rasterize(&l, &[(&sk, ChannelParams::new(1.0, 1.0))], coarse).unwrap();
        assert_eq!(warn.len(), 1);
    }

    #[test]
    fn systems_combine_by_maximum() {
        let l = lobe(TopMode::Flat);
        let a = straight(10.0, 90.0, 5.0);
        let b = straight(10.0, 90.0, -6.0);
        let cp = ChannelParams::new(4.0, 3.0);
        let spec = GridSpec::fit(l.bounds().0, l.bounds().1, [50, 20, 10]).unwrap();
        let (both, _) = rasterize(&l, &[(&a, cp), (&b, cp)], spec).unwrap();
        let (mut ga, _) = rasterize(&l, &[(&a, cp)], spec).unwrap();
        let (gb, _) = rasterize(&l, &[(&b, cp)], spec).unwrap();
        ga.merge_max(&gb).unwrap();
        assert_eq!(both, ga);
    }

    #[test]
    fn grid_io_round_trip() {
        let l = lobe(TopMode::Flat);
        let spec = GridSpec::fit(l.bounds().0, l.bounds().1, [20, 10, 5]).unwrap();
        let (g, _) = rasterize(
            &l,
            &[(&straight(10.0, 90.0, 0.0), ChannelParams::new(4.0, 3.0))],
            spec,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (json, raw) = g.write(&dir.path().join("model")).unwrap();
        assert_eq!(std::fs::read(&raw).unwrap().len(), 1000);
        let text = std::fs::read_to_string(json).unwrap();
        assert!(text.contains("\"x-fastest\"") && text.contains("\"uint8\""));
        assert_eq!(LabeledGrid3::read(&dir.path().join("model")).unwrap(), g);
        let ppm = g.slice_ppm(0, 10).unwrap();
        assert!(ppm.starts_with(b"P6\n10 5\n255\n"));
        assert!(g.slice_ppm(3, 0).is_err());
    }
}

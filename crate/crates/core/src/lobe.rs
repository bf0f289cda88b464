//! Parametric lobes.
//!
//! In its local frame a lobe runs along `x` from 0 to `L`. Two mirrored
//! outline curves give the half-width `w(x)` in the `xy` plane and a
//! profile curve gives the bottom depth `d(x)` in the `xz` plane. The cross
//! section at `x` is the quarter-ellipse pair
//! `z >= -d(x) * sqrt(1 - (y / w(x))^2)`, `|y| <= w(x)`, `z <= 0`.
//! Curves are sampled once into uniform-`x` tables.

use serde::{Deserialize, Serialize};

use crate::bspline::BSplineCurve;
use crate::error::{Error, Result};
use crate::geom::{Point2, Point3, EPS};
use crate::region::RegionBoundary;

/// Intervals in the `w(x)` and `d(x)` tables.
pub const TABLE_INTERVALS: usize = 1024;
const CURVE_SAMPLES: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Placement {
    #[serde(default)]
    pub dx: f64,
    #[serde(default)]
    pub dy: f64,
    #[serde(default)]
    pub rot_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopMode {
    #[default]
    Flat,
    Mounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    /// Teardrop outline and flat-bottomed profile.
    #[default]
    Default,
    /// Half-ellipse outline and profile, giving a half-ellipsoid lobe.
    HalfEllipse,
}

/// User-supplied control points in normalized units: outline points are
/// `(x / L, y / (W/2))` with `y >= 0`, profile points are `(x / L, depth / D)`
/// with depth measured downward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitControls {
    #[serde(default = "cubic")]
    pub degree: usize,
    pub outline: Vec<[f64; 2]>,
    pub profile: Vec<[f64; 2]>,
}

fn cubic() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LobeParams {
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "W")]
    pub width: f64,
    #[serde(rename = "D")]
    pub depth: f64,
    #[serde(default)]
    pub placement: Placement,
    #[serde(default)]
    pub top_mode: TopMode,
    #[serde(default)]
    pub relief: f64,
    #[serde(default)]
    pub template: Template,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controls: Option<ExplicitControls>,
}

impl LobeParams {
    pub fn new(length: f64, width: f64, depth: f64) -> Self {
        Self {
            length,
            width,
            depth,
            placement: Placement::default(),
            top_mode: TopMode::Flat,
            relief: 0.0,
            template: Template::Default,
            controls: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Lobe {
    params: LobeParams,
    b_right: BSplineCurve,
    b_left: BSplineCurve,
    /// Bottom curve in the `xz` plane (`z <= 0`).
    profile: BSplineCurve,
    w_table: Vec<f64>,
    d_table: Vec<f64>,
    cos: f64,
    sin: f64,
}

fn pts(v: &[[f64; 2]]) -> Vec<Point2> {
    v.iter().map(|&[x, y]| Point2::new(x, y)).collect()
}

/// Controls of a half ellipse from 0 to 1 in `x` with unit height, dense
/// near the ends where the slope is unbounded.
fn half_ellipse_controls(n: usize) -> Vec<Point2> {
    (0..=n)
        .map(|i| {
            let th = std::f64::consts::PI * i as f64 / n as f64;
            let u = -th.cos();
            Point2::new(0.5 * (1.0 + u), th.sin())
        })
        .collect()
}

/// Tabulates `y(x)` on `TABLE_INTERVALS + 1` uniform stations over
/// `[0, length]`, by linear interpolation between dense curve samples.
fn tabulate(curve: &BSplineCurve, length: f64, what: &str) -> Result<Vec<f64>> {
    let s = curve.sample(CURVE_SAMPLES);
    if s.windows(2).any(|w| w[1].x < w[0].x - EPS) {
        return Err(Error::InvalidTemplate(format!(
            "{what} curve is not monotone in x"
        )));
    }
    let first = s[0];
    let last = s[s.len() - 1];
    if first.x.abs() > EPS || (last.x - length).abs() > EPS * length.max(1.0) {
        return Err(Error::InvalidTemplate(format!(
            "{what} curve must run from x = 0 to x = L"
        )));
    }
    let mut out = Vec::with_capacity(TABLE_INTERVALS + 1);
    let mut j = 0;
    for i in 0..=TABLE_INTERVALS {
        let x = length * i as f64 / TABLE_INTERVALS as f64;
        while j + 2 < s.len() && s[j + 1].x < x {
            j += 1;
        }
        let (a, b) = (s[j], s[j + 1]);
        let y = if b.x - a.x > 0.0 {
            let f = ((x - a.x) / (b.x - a.x)).clamp(0.0, 1.0);
            a.y + (b.y - a.y) * f
        } else {
            a.y.max(b.y)
        };
        out.push(y);
    }
    out[0] = 0.0;
    out[TABLE_INTERVALS] = 0.0;
    Ok(out)
}

fn max_y(c: &BSplineCurve) -> f64 {
    c.sample(CURVE_SAMPLES)
        .iter()
        .map(|p| p.y)
        .fold(0.0, f64::max)
}

impl Lobe {
    pub fn build(params: &LobeParams) -> Result<Self> {
        let (l, w, d) = (params.length, params.width, params.depth);
        for (name, v) in [("L", l), ("W", w), ("D", d)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "lobe {name} must be positive, got {v}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&params.relief) {
            return Err(Error::InvalidArgument(format!(
                "relief must lie in [0, 1], got {}",
                params.relief
            )));
        }
        let half = w / 2.0;
        // Normalized curves: outline height 1 means W/2, profile height 1 means D.
        let (outline, profile) = if let Some(c) = &params.controls {
            (
                BSplineCurve::clamped_uniform(c.degree, pts(&c.outline))?,
                BSplineCurve::clamped_uniform(c.degree, pts(&c.profile))?,
            )
        } else {
            match params.template {
                Template::Default => {
                    let o = BSplineCurve::clamped_uniform(
                        3,
                        pts(&[[0.0, 0.0], [0.15, 0.5], [0.5, 1.0], [0.85, 0.5], [1.0, 0.0]]),
                    )?;
                    let p = BSplineCurve::clamped_uniform(
                        3,
                        pts(&[[0.0, 0.0], [0.3, 1.0], [0.7, 1.0], [1.0, 0.0]]),
                    )?;
                    // The spline stays inside its control hull; stretch it so
                    // the widest and deepest points reach W/2 and D.
                    let (so, sp) = (1.0 / max_y(&o), 1.0 / max_y(&p));
                    (
                        o.map(|q| Point2::new(q.x, q.y * so)),
                        p.map(|q| Point2::new(q.x, q.y * sp)),
                    )
                }
                Template::HalfEllipse => {
                    let c = half_ellipse_controls(512);
                    (
                        BSplineCurve::clamped_uniform(1, c.clone())?,
                        BSplineCurve::clamped_uniform(1, c)?,
                    )
                }
            }
        };
        if params.controls.is_some() {
            for (name, c) in [("outline", &outline), ("profile", &profile)] {
                if c.controls().iter().any(|q| q.y < 0.0) {
                    return Err(Error::InvalidTemplate(format!(
                        "{name} controls must have y >= 0"
                    )));
                }
            }
        }
        let b_right = outline.map(|q| Point2::new(q.x * l, q.y * half));
        let b_left = b_right.map(|q| Point2::new(q.x, -q.y));
        let profile = profile.map(|q| Point2::new(q.x * l, -q.y * d));
        let w_table = tabulate(&b_right, l, "outline")?;
        let d_table: Vec<f64> = tabulate(&profile, l, "profile")?
            .into_iter()
            .map(|z| -z)
            .collect();
        let th = params.placement.rot_deg.to_radians();
        Ok(Self {
            params: params.clone(),
            b_right,
            b_left,
            profile,
            w_table,
            d_table,
            cos: th.cos(),
            sin: th.sin(),
        })
    }

    pub fn params(&self) -> &LobeParams {
        &self.params
    }

    pub fn b_right(&self) -> &BSplineCurve {
        &self.b_right
    }

    pub fn b_left(&self) -> &BSplineCurve {
        &self.b_left
    }

    pub fn profile(&self) -> &BSplineCurve {
        &self.profile
    }

    pub fn length(&self) -> f64 {
        self.params.length
    }

    fn lookup(&self, table: &[f64], x: f64) -> f64 {
        let l = self.params.length;
        if !(0.0..=l).contains(&x) {
            return 0.0;
        }
        let f = x / l * TABLE_INTERVALS as f64;
        let i = (f.floor() as usize).min(TABLE_INTERVALS - 1);
        let r = f - i as f64;
        table[i] + (table[i + 1] - table[i]) * r
    }

    /// Half-width at local `x`; zero outside `[0, L]`.
    pub fn w(&self, x: f64) -> f64 {
        self.lookup(&self.w_table, x)
    }

    /// Bottom depth (positive) at local `x`; zero outside `[0, L]`.
    pub fn d(&self, x: f64) -> f64 {
        self.lookup(&self.d_table, x)
    }

    pub fn to_local(&self, p: Point2) -> Point2 {
        let (x, y) = (
            p.x - self.params.placement.dx,
            p.y - self.params.placement.dy,
        );
        Point2::new(self.cos * x + self.sin * y, -self.sin * x + self.cos * y)
    }

    pub fn to_world(&self, p: Point2) -> Point2 {
        Point2::new(
            self.cos * p.x - self.sin * p.y + self.params.placement.dx,
            self.sin * p.x + self.cos * p.y + self.params.placement.dy,
        )
    }

    /// Local `x` axis expressed in world coordinates.
    pub fn axis(&self) -> Point2 {
        Point2::new(self.cos, self.sin)
    }

    /// Membership in local coordinates; the boundary counts as inside.
    pub fn contains_local(&self, x: f64, y: f64, z: f64) -> bool {
        if z > 0.0 || !(0.0..=self.params.length).contains(&x) {
            return false;
        }
        let w = self.w(x);
        if w <= 0.0 || y.abs() > w {
            return false;
        }
        let r = y / w;
        z >= -self.d(x) * (1.0 - r * r).max(0.0).sqrt()
    }

    pub fn contains(&self, q: Point3) -> bool {
        let p = self.to_local(q.xy());
        self.contains_local(p.x, p.y, q.z)
    }

    /// Whether the world column through `(x, y)` crosses the outline.
    pub fn outline_contains(&self, p: Point2) -> bool {
        let q = self.to_local(p);
        (0.0..=self.params.length).contains(&q.x) && q.y.abs() <= self.w(q.x)
    }

    /// `b_right` forward then `b_left` backward, `n` intervals per side,
    /// in world coordinates.
    pub fn region_polygon(&self, n: usize) -> Result<RegionBoundary> {
        if n < 8 {
            return Err(Error::InvalidArgument(format!(
                "need at least 8 samples per side, got {n}"
            )));
        }
        let right = self.b_right.sample(n);
        let left = self.b_left.sample(n);
        let mut ring: Vec<Point2> = right.iter().map(|&p| self.to_world(p)).collect();
        ring.extend(left[1..n].iter().rev().map(|&p| self.to_world(p)));
        RegionBoundary::new(ring).map_err(|e| Error::InvalidOutline(e.to_string()))
    }

    /// Height of the lobe's upper surface over a world column.
    pub fn top_surface(&self, p: Point2) -> Result<f64> {
        let q = self.to_local(p);
        let l = self.params.length;
        let w = self.w(q.x);
        if !(-EPS..=l + EPS).contains(&q.x) || q.y.abs() > w + EPS {
            return Err(Error::Domain(format!(
                "({}, {}) lies outside the lobe outline",
                p.x, p.y
            )));
        }
        Ok(self.top_local(q.x, q.y))
    }

    /// Top surface in local coordinates, assuming the column is inside.
    pub fn top_local(&self, x: f64, y: f64) -> f64 {
        match self.params.top_mode {
            TopMode::Flat => 0.0,
            TopMode::Mounded => {
                let w = self.w(x);
                if w <= 0.0 {
                    return -self.params.relief * self.d(x);
                }
                let r = (y / w).clamp(-1.0, 1.0);
                -self.params.relief * self.d(x) * (1.0 - (1.0 - r * r).max(0.0).sqrt())
            }
        }
    }

    /// World-space bounding box of the solid.
    pub fn bounds(&self) -> (Point3, Point3) {
        let l = self.params.length;
        let hw = self.w_table.iter().copied().fold(0.0, f64::max);
        let dmax = self.d_table.iter().copied().fold(0.0, f64::max);
        let corners = [
            Point2::new(0.0, -hw),
            Point2::new(l, -hw),
            Point2::new(l, hw),
            Point2::new(0.0, hw),
        ]
        .map(|p| self.to_world(p));
        let lo = corners
            .iter()
            .fold(Point2::new(f64::INFINITY, f64::INFINITY), |a, p| {
                Point2::new(a.x.min(p.x), a.y.min(p.y))
            });
        let hi = corners
            .iter()
            .fold(Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| {
                Point2::new(a.x.max(p.x), a.y.max(p.y))
            });
        (Point3::new(lo.x, lo.y, -dmax), Point3::new(hi.x, hi.y, 0.0))
    }

    pub fn max_half_width(&self) -> f64 {
        self.w_table.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_depth(&self) -> f64 {
        self.d_table.iter().copied().fold(0.0, f64::max)
    }
}

pub fn build_lobe(params: &LobeParams) -> Result<Lobe> {
    Lobe::build(params)
}

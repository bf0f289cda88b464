//! Planar primitives and the predicates shared by every stage.
//!
//! All predicates use one absolute tolerance, [`EPS`], in grid units.
//! Coordinates in this crate are bounded by image or lobe sizes, so an
//! absolute tolerance is adequate.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for geometric predicates, in grid units.
pub const EPS: f64 = 1e-9;

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

pub type Vec2 = Point2;

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z component of the 3D cross product.
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > EPS && n.is_finite()).then(|| self * (1.0 / n))
    }

    /// Counter-clockwise rotation by `theta` radians.
    pub fn rotated(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, o: Self, t: f64) -> Self {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// A point in space; `z` points up and the model lives in `z <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn xy(self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Counter-clockwise signed rotation taking `u` onto `v`, in `(-π, π]`.
pub fn signed_angle(u: Vec2, v: Vec2) -> Result<f64> {
    if u.norm() <= EPS || v.norm() <= EPS {
        return Err(Error::InvalidArgument(
            "signed_angle needs non-zero vectors".into(),
        ));
    }
    let a = u.cross(v).atan2(u.dot(v));
    Ok(if a <= -PI { PI } else { a })
}

/// Where two closed segments meet, expressed along the first one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contact {
    /// A single common point at parameter `t` of the first segment.
    Point { t: f64, point: Point2 },
    /// Collinear overlap covering `[t0, t1]` of the first segment.
    Overlap { t0: f64, t1: f64 },
}

/// Full contact classification of two closed segments. Both segments must
/// have length greater than [`EPS`].
pub fn segment_contact(a1: Point2, a2: Point2, b1: Point2, b2: Point2) -> Option<Contact> {
    let d = a2 - a1;
    let e = b2 - b1;
    let dl = d.norm();
    let el = e.norm();
    let denom = d.cross(e);
    let w = b1 - a1;
    if denom.abs() > 1e-12 * dl * el {
        let t = w.cross(e) / denom;
        let u = w.cross(d) / denom;
        let tt = EPS / dl;
        let tu = EPS / el;
        if t < -tt || t > 1.0 + tt || u < -tu || u > 1.0 + tu {
            // The lines cross outside the segments, but an endpoint may still
            // sit within tolerance of the other segment.
            return near_endpoint_contact(a1, a2, b1, b2);
        }
        let t = t.clamp(0.0, 1.0);
        return Some(Contact::Point {
            t,
            point: a1 + d * t,
        });
    }
    // Parallel: only collinear segments can meet.
    if (w.cross(d) / dl).abs() > EPS || ((b2 - a1).cross(d) / dl).abs() > EPS {
        return None;
    }
    let inv = 1.0 / (dl * dl);
    let s1 = w.dot(d) * inv;
    let s2 = (b2 - a1).dot(d) * inv;
    let lo = s1.min(s2).max(0.0);
    let hi = s1.max(s2).min(1.0);
    let tt = EPS / dl;
    if lo > hi + tt {
        return None;
    }
    if (hi - lo) * dl <= EPS {
        let t = (0.5 * (lo + hi)).clamp(0.0, 1.0);
        return Some(Contact::Point {
            t,
            point: a1 + d * t,
        });
    }
    Some(Contact::Overlap { t0: lo, t1: hi })
}

fn near_endpoint_contact(a1: Point2, a2: Point2, b1: Point2, b2: Point2) -> Option<Contact> {
    let d = a2 - a1;
    let dl2 = d.dot(d);
    let mut best: Option<f64> = None;
    for p in [b1, b2] {
        let t = ((p - a1).dot(d) / dl2).clamp(0.0, 1.0);
        if (a1 + d * t).dist(p) <= EPS {
            best = Some(best.map_or(t, |b: f64| b.min(t)));
        }
    }
    for (t, p) in [(0.0, a1), (1.0, a2)] {
        if distance_to_segment(p, b1, b2) <= EPS {
            best = Some(best.map_or(t, |b: f64| b.min(t)));
        }
    }
    best.map(|t| Contact::Point {
        t,
        point: a1 + d * t,
    })
}

/// First point of segment `b` met when walking segment `a` away from `a1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intersection {
    pub point: Point2,
    pub t: f64,
}

/// Smallest-`t` contact of segment `a` with segment `b`, excluding contact at
/// `a1` itself. A collinear overlap reports the overlap point nearest `a1`;
/// an overlap that starts at `a1` reports the smallest positive parameter the
/// tolerance can resolve.
pub fn segment_intersection(
    a1: Point2,
    a2: Point2,
    b1: Point2,
    b2: Point2,
) -> Result<Option<Intersection>> {
    let dl = a1.dist(a2);
    if dl <= EPS || b1.dist(b2) <= EPS {
        return Err(Error::InvalidArgument(
            "segment_intersection needs segments of positive length".into(),
        ));
    }
    let tmin = EPS / dl;
    Ok(match segment_contact(a1, a2, b1, b2) {
        None => None,
        Some(Contact::Point { t, point }) => (t > tmin).then_some(Intersection { point, t }),
        Some(Contact::Overlap { t0, .. }) => {
            let t = t0.max(tmin);
            Some(Intersection {
                point: a1.lerp(a2, t),
                t,
            })
        }
    })
}

pub fn distance_to_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let l2 = d.dot(d);
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Shoelace area; positive for counter-clockwise rings.
pub fn polygon_signed_area(ring: &[Point2]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| ring[i].cross(ring[(i + 1) % n]))
        .sum::<f64>()
        * 0.5
}

/// Even-odd containment with the boundary (within [`EPS`]) counted inside.
pub fn point_in_polygon(ring: &[Point2], p: Point2) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if distance_to_segment(p, a, b) <= EPS {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Returns the first pair of non-adjacent ring edges that touch, if any.
pub fn ring_self_intersection(ring: &[Point2]) -> Option<(usize, usize)> {
    let n = ring.len();
    for i in 0..n {
        let (a1, a2) = (ring[i], ring[(i + 1) % n]);
        if a1.dist(a2) <= EPS {
            return Some((i, i));
        }
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (b1, b2) = (ring[j], ring[(j + 1) % n]);
            match segment_contact(a1, a2, b1, b2) {
                None => {}
                Some(Contact::Overlap { .. }) => return Some((i, j)),
                Some(Contact::Point { point, .. }) => {
                    if !adjacent {
                        return Some((i, j));
                    }
                    let shared = if j == i + 1 { a2 } else { a1 };
                    if point.dist(shared) > EPS {
                        return Some((i, j));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn signed_angle_examples() {
        assert!((signed_angle(p(1.0, 0.0), p(0.0, 1.0)).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(signed_angle(p(1.0, 0.0), p(1.0, 0.0)).unwrap(), 0.0);
        let h = 2f64.sqrt() / 2.0;
        let a = signed_angle(p(1.0, 0.0), p(h, -h)).unwrap();
        assert!((a + PI / 4.0).abs() < 1e-15);
        assert_eq!(signed_angle(p(1.0, 0.0), p(-1.0, 0.0)).unwrap(), PI);
        assert_eq!(signed_angle(p(1.0, 0.0), p(-1.0, -0.0)).unwrap(), PI);
    }

    #[test]
    fn signed_angle_rejects_zero() {
        assert!(matches!(
            signed_angle(p(0.0, 0.0), p(1.0, 0.0)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn intersection_examples() {
        let hit = segment_intersection(p(0.0, 0.0), p(2.0, 0.0), p(1.0, -1.0), p(1.0, 1.0))
            .unwrap()
            .unwrap();
        assert!((hit.t - 0.5).abs() < 1e-15);
        assert!(hit.point.dist(p(1.0, 0.0)) < 1e-15);

        assert_eq!(
            segment_intersection(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)).unwrap(),
            None
        );

        let hit = segment_intersection(p(0.0, 0.0), p(4.0, 0.0), p(2.0, 0.0), p(6.0, 0.0))
            .unwrap()
            .unwrap();
        assert!((hit.t - 0.5).abs() < 1e-15);
        assert!(hit.point.dist(p(2.0, 0.0)) < 1e-15);
    }

    #[test]
    fn contact_at_origin_is_not_reported() {
        // b starts at a1
        assert_eq!(
            segment_intersection(p(0.0, 0.0), p(2.0, 0.0), p(0.0, 0.0), p(0.0, 3.0)).unwrap(),
            None
        );
        // b ends at a1
        assert_eq!(
            segment_intersection(p(0.0, 0.0), p(2.0, 0.0), p(1.0, 1.0), p(0.0, 0.0)).unwrap(),
            None
        );
        // contact at a2 is reported
        let hit = segment_intersection(p(0.0, 0.0), p(2.0, 0.0), p(2.0, 1.0), p(2.0, -1.0))
            .unwrap()
            .unwrap();
        assert_eq!(hit.t, 1.0);
    }

    #[test]
    fn overlap_starting_at_origin_is_reported_near_origin() {
        let hit = segment_intersection(p(0.0, 0.0), p(4.0, 0.0), p(0.0, 0.0), p(2.0, 0.0))
            .unwrap()
            .unwrap();
        assert!(hit.t > 0.0 && hit.t * 4.0 <= 1e-8);
    }

    #[test]
    fn degenerate_segment_is_an_error() {
        assert!(segment_intersection(p(1.0, 1.0), p(1.0, 1.0), p(0.0, 0.0), p(1.0, 0.0)).is_err());
        assert!(segment_intersection(p(0.0, 0.0), p(1.0, 0.0), p(3.0, 3.0), p(3.0, 3.0)).is_err());
    }

    /// Exact rational arithmetic over small integers, used as an oracle for
    /// collinear overlaps.
    #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
    struct Q(i128, i128);
    fn q(n: i128, d: i128) -> Q {
        let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = gcd(n.abs(), d);
        Q(n / g, d / g)
    }
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.max(1)
        } else {
            gcd(b, a % b)
        }
    }
    fn qlt(a: Q, b: Q) -> bool {
        a.0 * b.1 < b.0 * a.1
    }

    #[test]
    fn collinear_overlap_matches_rational_oracle() {
        // All integer collinear configurations along a line with direction
        // (dx, dy), brute-forced over small offsets.
        for (dx, dy) in [(1i128, 0i128), (0, 1), (1, 1), (2, -1), (3, 2)] {
            for a_len in 1..=4i128 {
                for s in -5..=6i128 {
                    for e in -5..=6i128 {
                        if s == e {
                            continue;
                        }
                        // a = 0 -> a_len, b = s -> e (multiples of (dx,dy))
                        let lo = q(s.min(e).max(0), 1);
                        let hi = q(s.max(e).min(a_len), 1);
                        let expect = if qlt(hi, lo) {
                            None
                        } else if lo == hi && lo == q(0, 1) {
                            None
                        } else {
                            let t = q(lo.0, lo.1 * a_len);
                            Some(t)
                        };
                        let pt = |k: i128| p((k * dx) as f64, (k * dy) as f64);
                        let got = segment_intersection(pt(0), pt(a_len), pt(s), pt(e)).unwrap();
                        match (expect, got) {
                            (None, None) => {}
                            (Some(t), Some(hit)) => {
                                let tf = t.0 as f64 / t.1 as f64;
                                if tf == 0.0 {
                                    // overlap starting at a1
                                    assert!(hit.t > 0.0 && hit.t <= 2e-9, "{s} {e} {a_len}");
                                } else {
                                    assert!((hit.t - tf).abs() < 1e-12, "{s} {e} {a_len}");
                                }
                            }
                            (x, y) => {
                                panic!("mismatch {x:?} vs {y:?} for a_len={a_len} b={s}->{e}")
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn polygon_helpers() {
        let sq = [p(0.0, 0.0), p(2.0, 0.0), p(2.0, 2.0), p(0.0, 2.0)];
        assert_eq!(polygon_signed_area(&sq), 4.0);
        assert!(point_in_polygon(&sq, p(1.0, 1.0)));
        assert!(point_in_polygon(&sq, p(2.0, 1.0)));
        assert!(!point_in_polygon(&sq, p(2.0 + 1e-6, 1.0)));
        assert_eq!(ring_self_intersection(&sq), None);
        let bowtie = [p(0.0, 0.0), p(2.0, 2.0), p(2.0, 0.0), p(0.0, 2.0)];
        assert!(ring_self_intersection(&bowtie).is_some());
    }

    proptest! {
        #[test]
        fn rotation_by_signed_angle_reproduces_target(a in -PI..PI, b in -PI..PI) {
            let u = Point2::from_angle(a);
            let v = Point2::from_angle(b);
            let s = signed_angle(u, v).unwrap();
            prop_assert!(s.abs() <= PI);
            prop_assert!(u.rotated(s).dist(v) < 1e-9);
            let r = signed_angle(v, u).unwrap();
            if (s.abs() - PI).abs() > 1e-12 {
                prop_assert!((s + r).abs() < 1e-12);
            }
        }

        #[test]
        fn crossing_existence_is_symmetric(
            c in proptest::array::uniform8(-10.0f64..10.0)
        ) {
            let (a1, a2, b1, b2) = (p(c[0], c[1]), p(c[2], c[3]), p(c[4], c[5]), p(c[6], c[7]));
            prop_assume!(a1.dist(a2) > 1e-3 && b1.dist(b2) > 1e-3);
            // Generic segments: endpoint contacts have probability zero.
            prop_assume!([a1, a2].iter().all(|&q| distance_to_segment(q, b1, b2) > 1e-6));
            prop_assume!([b1, b2].iter().all(|&q| distance_to_segment(q, a1, a2) > 1e-6));
            let ab = segment_intersection(a1, a2, b1, b2).unwrap();
            let ba = segment_intersection(b1, b2, a1, a2).unwrap();
            prop_assert_eq!(ab.is_some(), ba.is_some());
            if let (Some(x), Some(y)) = (ab, ba) {
                prop_assert!(x.point.dist(y.point) < 1e-9);
            }
        }
    }
}

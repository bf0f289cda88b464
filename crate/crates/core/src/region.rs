//! Simple polygons that bound skeleton growth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    point_in_polygon, polygon_signed_area, ring_self_intersection, segment_contact, Contact,
    Point2, EPS,
};

/// A simple polygon stored counter-clockwise. Serialized as a list of
/// `[x, y]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct RegionBoundary {
    ring: Vec<Point2>,
    lo: Point2,
    hi: Point2,
}

impl TryFrom<Vec<[f64; 2]>> for RegionBoundary {
    type Error = Error;

    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(v.into_iter().map(|[x, y]| Point2::new(x, y)).collect())
    }
}

impl From<RegionBoundary> for Vec<[f64; 2]> {
    fn from(r: RegionBoundary) -> Self {
        r.ring.iter().map(|p| [p.x, p.y]).collect()
    }
}

impl RegionBoundary {
    /// Accepts either orientation; a repeated closing vertex is dropped.
    pub fn new(mut ring: Vec<Point2>) -> Result<Self> {
        if ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        if ring.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "region needs at least 3 vertices, got {}",
                ring.len()
            )));
        }
        if ring.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("region vertex is not finite".into()));
        }
        let area = polygon_signed_area(&ring);
        if area.abs() <= EPS {
            return Err(Error::InvalidArgument("region has zero area".into()));
        }
        if let Some((i, j)) = ring_self_intersection(&ring) {
            return Err(Error::InvalidArgument(format!(
                "region boundary is not simple: edges {i} and {j} touch"
            )));
        }
        if area < 0.0 {
            ring.reverse();
        }
        let lo = ring
            .iter()
            .fold(Point2::new(f64::INFINITY, f64::INFINITY), |a, p| {
                Point2::new(a.x.min(p.x), a.y.min(p.y))
            });
        let hi = ring
            .iter()
            .fold(Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| {
                Point2::new(a.x.max(p.x), a.y.max(p.y))
            });
        Ok(Self { ring, lo, hi })
    }

    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(vec![
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ])
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.ring
    }

    pub fn area(&self) -> f64 {
        polygon_signed_area(&self.ring)
    }

    pub fn bounds(&self) -> (Point2, Point2) {
        (self.lo, self.hi)
    }

    /// Boundary inclusive.
    pub fn contains(&self, p: Point2) -> bool {
        if p.x < self.lo.x - EPS
            || p.y < self.lo.y - EPS
            || p.x > self.hi.x + EPS
            || p.y > self.hi.y + EPS
        {
            return false;
        }
        point_in_polygon(&self.ring, p)
    }

    /// Parameter along `a -> b` where the segment first leaves the region,
    /// or `None` if it stays inside. Returns `Some(0.0)` when `a` is
    /// outside or leaves immediately.
    pub fn first_exit(&self, a: Point2, b: Point2) -> Option<f64> {
        if a.dist(b) <= EPS {
            return (!self.contains(a)).then_some(0.0);
        }
        let mut ts = vec![0.0, 1.0];
        let n = self.ring.len();
        for i in 0..n {
            let (p, q) = (self.ring[i], self.ring[(i + 1) % n]);
            match segment_contact(a, b, p, q) {
                None => {}
                Some(Contact::Point { t, .. }) => ts.push(t),
                Some(Contact::Overlap { t0, t1 }) => {
                    ts.push(t0);
                    ts.push(t1);
                }
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        if !self.contains(a) {
            return Some(0.0);
        }
        for w in ts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            if !self.contains(a.lerp(b, mid)) {
                return Some(w[0]);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let cw = RegionBoundary::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 2.0),
            Point2::new(2.0, 2.0),
            Point2::new(2.0, 0.0),
        ])
        .unwrap();
        assert!((cw.area() - 4.0).abs() < 1e-12);
        let bowtie = RegionBoundary::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 2.0),
            Point2::new(2.0, 0.0),
            Point2::new(0.0, 2.0),
        ]);
        assert!(bowtie.is_err());
        assert!(RegionBoundary::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn exits() {
        let sq = RegionBoundary::rectangle(0.0, 0.0, 10.0, 10.0).unwrap();
        assert!(sq.contains(Point2::new(10.0, 5.0)));
        assert!(!sq.contains(Point2::new(10.1, 5.0)));
        let t = sq
            .first_exit(Point2::new(9.0, 5.0), Point2::new(14.0, 5.0))
            .unwrap();
        assert!((t - 0.2).abs() < 1e-12);
        assert_eq!(
            sq.first_exit(Point2::new(1.0, 1.0), Point2::new(9.0, 9.0)),
            None
        );
        // Running along the boundary stays inside.
        assert_eq!(
            sq.first_exit(Point2::new(0.0, 0.0), Point2::new(0.0, 10.0)),
            None
        );
        assert_eq!(
            sq.first_exit(Point2::new(0.0, 5.0), Point2::new(-3.0, 5.0)),
            Some(0.0)
        );
    }

    #[test]
    fn concave_exit_is_the_first_one() {
        // U shape: the segment crosses the notch and re-enters.
        let u = RegionBoundary::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(9.0, 0.0),
            Point2::new(9.0, 9.0),
            Point2::new(6.0, 9.0),
            Point2::new(6.0, 3.0),
            Point2::new(3.0, 3.0),
            Point2::new(3.0, 9.0),
            Point2::new(0.0, 9.0),
        ])
        .unwrap();
        let t = u
            .first_exit(Point2::new(1.0, 6.0), Point2::new(8.0, 6.0))
            .unwrap();
        assert!((t - 2.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn json_is_a_list_of_pairs() {
        let sq = RegionBoundary::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let text = serde_json::to_string(&sq).unwrap();
        assert_eq!(text, "[[0.0,0.0],[1.0,0.0],[1.0,1.0],[0.0,1.0]]");
        let back: RegionBoundary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sq);
        assert!(serde_json::from_str::<RegionBoundary>("[[0,0],[1,1]]").is_err());
    }
}

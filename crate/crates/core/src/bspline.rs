//! Clamped B-spline curves in the plane.

use crate::error::{Error, Result};
use crate::geom::Point2;

#[derive(Debug, Clone, PartialEq)]
pub struct BSplineCurve {
    degree: usize,
    controls: Vec<Point2>,
    knots: Vec<f64>,
}

impl BSplineCurve {
    /// Checks that `knots` is non-decreasing, spans `[0, 1]`, and has
    /// multiplicity `degree + 1` at both ends.
    pub fn new(degree: usize, controls: Vec<Point2>, knots: Vec<f64>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidTemplate(m));
        if degree == 0 {
            return bad("degree must be at least 1".into());
        }
        if controls.len() < degree + 1 {
            return bad(format!(
                "degree {degree} needs at least {} control points, got {}",
                degree + 1,
                controls.len()
            ));
        }
        if controls.iter().any(|p| !p.is_finite()) {
            return bad("control point is not finite".into());
        }
        if knots.len() != controls.len() + degree + 1 {
            return bad(format!(
                "expected {} knots, got {}",
                controls.len() + degree + 1,
                knots.len()
            ));
        }
        if knots.windows(2).any(|w| w[0] > w[1]) {
            return bad("knots must be non-decreasing".into());
        }
        let n = knots.len();
        if knots[..=degree].iter().any(|&k| k != 0.0)
            || knots[n - degree - 1..].iter().any(|&k| k != 1.0)
        {
            return bad("knot vector must be clamped to [0, 1]".into());
        }
        Ok(Self {
            degree,
            controls,
            knots,
        })
    }

    /// Uniform interior knots, clamped ends.
    pub fn clamped_uniform(degree: usize, controls: Vec<Point2>) -> Result<Self> {
        let n = controls.len();
        if n < degree + 1 || degree == 0 {
            return Self::new(degree, controls, vec![]);
        }
        let spans = n - degree;
        let mut knots = vec![0.0; degree + 1];
        knots.extend((1..spans).map(|i| i as f64 / spans as f64));
        knots.extend(std::iter::repeat(1.0).take(degree + 1));
        Self::new(degree, controls, knots)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn controls(&self) -> &[Point2] {
        &self.controls
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Index `k` of the knot span with `knots[k] <= t < knots[k + 1]`; the
    /// last non-empty span for `t = 1`.
    fn span(&self, t: f64) -> usize {
        let n = self.controls.len();
        if t >= 1.0 {
            return n - 1;
        }
        let k = self.knots.partition_point(|&u| u <= t) - 1;
        k.clamp(self.degree, n - 1)
    }

    /// De Boor evaluation.
    pub fn eval(&self, t: f64) -> Result<Point2> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("curve parameter {t} outside [0, 1]")));
        }
        let p = self.degree;
        let k = self.span(t);
        let mut d: Vec<Point2> = (0..=p).map(|j| self.controls[j + k - p]).collect();
        for r in 1..=p {
            for j in (r..=p).rev() {
                let i = j + k - p;
                let lo = self.knots[i];
                let hi = self.knots[i + 1 + p - r];
                let a = if hi > lo { (t - lo) / (hi - lo) } else { 0.0 };
                d[j] = d[j - 1] * (1.0 - a) + d[j] * a;
            }
        }
        Ok(d[p])
    }

    /// `n + 1` points at uniformly spaced parameters.
    pub fn sample(&self, n: usize) -> Vec<Point2> {
        (0..=n)
            .map(|i| self.eval(i as f64 / n as f64).expect("parameter in range"))
            .collect()
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Self {
        Self {
            degree: self.degree,
            controls: self.controls.iter().map(|&p| f(p)).collect(),
            knots: self.knots.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cox-de Boor recursion with the 0/0 = 0 convention; the last basis
    /// function is closed on the right so that t = 1 is covered.
    fn basis(knots: &[f64], i: usize, p: usize, t: f64) -> f64 {
        if p == 0 {
            let last = knots[i + 1] == 1.0 && knots[i] < 1.0 && t == 1.0;
            return if (knots[i] <= t && t < knots[i + 1]) || last {
                1.0
            } else {
                0.0
            };
        }
        let mut v = 0.0;
        let d1 = knots[i + p] - knots[i];
        if d1 > 0.0 {
            v += (t - knots[i]) / d1 * basis(knots, i, p - 1, t);
        }
        let d2 = knots[i + p + 1] - knots[i + 1];
        if d2 > 0.0 {
            v += (knots[i + p + 1] - t) / d2 * basis(knots, i + 1, p - 1, t);
        }
        v
    }

    fn by_basis(c: &BSplineCurve, t: f64) -> Point2 {
        c.controls()
            .iter()
            .enumerate()
            .fold(Point2::new(0.0, 0.0), |acc, (i, &q)| {
                acc + q * basis(c.knots(), i, c.degree(), t)
            })
    }

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn linear() {
        let c = BSplineCurve::clamped_uniform(1, vec![p(0.0, 0.0), p(10.0, 2.0)]).unwrap();
        assert_eq!(c.eval(0.5).unwrap(), p(5.0, 1.0));
        assert!(matches!(c.eval(1.5), Err(Error::Domain(_))));
        assert!(c.eval(-0.1).is_err());
    }

    #[test]
    fn cubic_matches_basis_sum() {
        let c = BSplineCurve::clamped_uniform(
            3,
            vec![p(0.0, 0.0), p(1.0, 3.0), p(3.0, 3.0), p(4.0, 0.0)],
        )
        .unwrap();
        let v = c.eval(0.5).unwrap();
        let o = by_basis(&c, 0.5);
        assert!(v.dist(o) < 1e-12);
        // Bezier value at the middle: (2, 2.25).
        assert!(v.dist(p(2.0, 2.25)) < 1e-12);
        assert_eq!(c.eval(0.0).unwrap(), p(0.0, 0.0));
        assert_eq!(c.eval(1.0).unwrap(), p(4.0, 0.0));
    }

    #[test]
    fn bad_knots() {
        let ctl = vec![p(0.0, 0.0), p(1.0, 1.0), p(2.0, 0.0)];
        assert!(BSplineCurve::new(2, ctl.clone(), vec![0.0, 0.0, 0.0, 1.0, 1.0]).is_err());
        assert!(BSplineCurve::new(2, ctl.clone(), vec![0.0, 0.0, 0.1, 1.0, 1.0, 1.0]).is_err());
        assert!(BSplineCurve::new(0, ctl.clone(), vec![0.0, 0.5, 1.0]).is_err());
        assert!(BSplineCurve::new(2, ctl, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).is_ok());
    }

    proptest! {
        #[test]
        fn de_boor_agrees_with_basis(
            degree in 1usize..=4,
            ys in prop::collection::vec(-5.0f64..5.0, 5..12),
            t in 0.0f64..=1.0,
        ) {
            let ctl: Vec<Point2> = ys.iter().enumerate().map(|(i, &y)| p(i as f64, y)).collect();
            let c = BSplineCurve::clamped_uniform(degree, ctl.clone()).unwrap();
            prop_assert!(c.eval(t).unwrap().dist(by_basis(&c, t)) < 1e-9);
            prop_assert_eq!(c.eval(0.0).unwrap(), ctl[0]);
            prop_assert!(c.eval(1.0).unwrap().dist(*ctl.last().unwrap()) < 1e-12);
        }
    }
}

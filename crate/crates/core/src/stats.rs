//! Bifurcation-angle and edge-length samples and their fitted distributions.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::signed_angle;
use crate::skeleton::Skeleton;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uniform {
    pub lo: f64,
    pub hi: f64,
}

impl Uniform {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidArgument(format!(
                "bad uniform support [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// One draw from `[lo, hi]`; consumes exactly one `f64` from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        (self.lo + (self.hi - self.lo) * u).clamp(self.lo, self.hi)
    }
}

pub fn fit_uniform(samples: &[f64]) -> Result<Uniform> {
    if samples.is_empty() {
        return Err(Error::InsufficientData(
            "cannot fit a distribution to zero samples".into(),
        ));
    }
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Uniform::new(lo, hi)
}

/// Raw samples read off a training skeleton.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSamples {
    pub signed_angles: Vec<f64>,
    pub lengths: Vec<f64>,
}

/// Every edge contributes its length and its turn relative to the
/// direction it leaves its father along (the root's inflow for root edges).
pub fn extract_samples(sk: &Skeleton) -> Result<TrainingSamples> {
    if sk.edge_count() == 0 {
        return Err(Error::EmptySkeleton);
    }
    let mut out = TrainingSamples {
        signed_angles: Vec::new(),
        lengths: Vec::new(),
    };
    for e in sk.edges() {
        out.lengths.push(sk.edge_length(e.id));
        let father = sk.node(e.father);
        if let Some(u) = father.parent_direction() {
            out.signed_angles
                .push(signed_angle(u, sk.edge_direction(e.id))?);
        }
    }
    Ok(out)
}

impl TrainingSamples {
    pub fn fit(self) -> Result<TrainingStats> {
        let angle_dist = fit_uniform(&self.signed_angles)?;
        let length_dist = fit_uniform(&self.lengths)?;
        Ok(TrainingStats {
            signed_angles: self.signed_angles,
            lengths: self.lengths,
            angle_dist,
            length_dist,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingStats {
    #[serde(rename = "angles")]
    pub signed_angles: Vec<f64>,
    pub lengths: Vec<f64>,
    pub angle_dist: Uniform,
    pub length_dist: Uniform,
}

impl TrainingStats {
    pub fn from_skeleton(sk: &Skeleton) -> Result<Self> {
        extract_samples(sk)?.fit()
    }

    /// Distributions only, for hand-written configurations.
    pub fn from_distributions(angle_dist: Uniform, length_dist: Uniform) -> Result<Self> {
        let s = Self {
            signed_angles: vec![],
            lengths: vec![],
            angle_dist,
            length_dist,
        };
        s.check()?;
        Ok(s)
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| {
            Err(Error::Parse {
                what: "stats".into(),
                msg: m,
            })
        };
        for d in [self.angle_dist, self.length_dist] {
            Uniform::new(d.lo, d.hi)?;
        }
        if self.length_dist.lo <= 0.0 {
            return bad(format!(
                "length support must be positive, got lo = {}",
                self.length_dist.lo
            ));
        }
        if let Some(v) = self
            .signed_angles
            .iter()
            .find(|v| !self.angle_dist.contains(**v))
        {
            return bad(format!("angle sample {v} outside its distribution"));
        }
        if let Some(v) = self
            .lengths
            .iter()
            .find(|v| !self.length_dist.contains(**v) || **v <= 0.0)
        {
            return bad(format!(
                "length sample {v} invalid or outside its distribution"
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self =
            serde_json::from_str(text).map_err(|e| Error::parse("stats", e.to_string()))?;
        s.check()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

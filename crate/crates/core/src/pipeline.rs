//! End-to-end orchestration: training image to skeleton, skeleton to
//! statistics, statistics to realizations, realizations to a labeled grid.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geom::{Point2, Point3, Vec2};
use crate::graph::{extract_graph, ExtractOptions};
use crate::lobe::{Lobe, LobeParams};
use crate::plot;
use crate::raster::{read_binary_image, write_file, BinaryImage};
use crate::region::RegionBoundary;
use crate::skeleton::{write_csv, Skeleton};
use crate::stats::TrainingStats;
use crate::synth::{synthesize, GrowthConfig};
use crate::thinning::{thin, PixelSkeleton};
use crate::volume::{
    rasterize_into, resolution_warnings, ChannelParams, ChannelVolume, GridSpec, LabeledGrid3,
    CHANNEL, LOBE,
};

/// Added per lobe index when deriving a system's seed.
pub const SEED_STRIDE: u64 = 10007;

pub fn derive_seed(seed: u64, lobe: usize, system: usize) -> u64 {
    seed.wrapping_add((lobe as u64).wrapping_mul(SEED_STRIDE))
        .wrapping_add(system as u64)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Thins `img` and extracts its graph.
pub fn skeletonize(
    img: &BinaryImage,
    root_hint: (usize, usize),
    prune_length: usize,
) -> Result<(Skeleton, PixelSkeleton)> {
    let ps = thin(img)?;
    let opts = ExtractOptions {
        prune_length,
        ..ExtractOptions::default()
    };
    let sk = extract_graph(&ps, root_hint, &opts)?;
    Ok((sk, ps))
}

pub fn skeletonize_file(
    path: &Path,
    invert: bool,
    root_hint: (usize, usize),
    prune_length: usize,
) -> Result<(Skeleton, PixelSkeleton)> {
    let img = read_binary_image(path, invert)?;
    skeletonize(&img, root_hint, prune_length)
}

/// Fits the statistics and reports degenerate (single-valued) distributions.
pub fn stats_with_warnings(sk: &Skeleton) -> Result<(TrainingStats, Vec<String>)> {
    let stats = TrainingStats::from_skeleton(sk)?;
    let mut warnings = Vec::new();
    for (name, d) in [("angle", stats.angle_dist), ("length", stats.length_dist)] {
        if d.lo == d.hi {
            warnings.push(format!(
                "{name} distribution is degenerate: U[{}, {}]",
                d.lo, d.hi
            ));
        }
    }
    Ok((stats, warnings))
}

/// Default root for a bare region: its first vertex, flowing toward the
/// vertex average.
pub fn default_root(region: &RegionBoundary) -> Result<(Point2, Vec2)> {
    let v = region.vertices();
    let c = v.iter().fold(Point2::new(0.0, 0.0), |a, &p| a + p) * (1.0 / v.len() as f64);
    let dir = (c - v[0])
        .normalized()
        .ok_or_else(|| Error::InvalidOutline("first vertex coincides with the centroid".into()))?;
    Ok((v[0], dir))
}

pub fn load_region(path: &Path) -> Result<RegionBoundary> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("region {}", path.display()), e))
}

pub fn region_json(region: &RegionBoundary) -> String {
    serde_json::to_string_pretty(region).expect("region serialize") + "\n"
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunGrowth {
    pub max_bif_steps: usize,
    #[serde(default = "two")]
    pub root_mark: u8,
    #[serde(default = "one")]
    pub min_edge_length: f64,
    /// Outline samples per side of the region polygon.
    #[serde(default = "region_samples")]
    pub region_samples: usize,
    /// Root position in lobe-local units: fraction of the length along the
    /// axis and fraction of the half width across it.
    #[serde(default = "root_local")]
    pub root_local: [f64; 2],
}

fn two() -> u8 {
    2
}

fn one() -> f64 {
    1.0
}

fn region_samples() -> usize {
    64
}

fn root_local() -> [f64; 2] {
    [0.05, 0.0]
}

fn three() -> usize {
    3
}

/// Either a fixed cell count (spacing chosen to fit all lobes) or a fixed
/// spacing (cell count chosen to cover them).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridChoice {
    Dims([usize; 3]),
    Spacing(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub training_image: PathBuf,
    #[serde(default)]
    pub invert: bool,
    pub root_hint: [usize; 2],
    #[serde(default = "three")]
    pub prune_length: usize,
    pub growth: RunGrowth,
    pub lobes: Vec<LobeParams>,
    pub systems_per_lobe: usize,
    pub channel: ChannelParams,
    pub grid: GridChoice,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// Parses a config; relative paths are resolved against `base`.
    pub fn from_json(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::parse("run config", e))?;
        cfg.training_image = base.join(&cfg.training_image);
        cfg.output_dir = base.join(&cfg.output_dir);
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&text, base)
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.systems_per_lobe == 0 {
            return bad("systems_per_lobe must be at least 1".into());
        }
        if self.lobes.is_empty() {
            return bad("at least one lobe is required".into());
        }
        if !self.training_image.is_file() {
            return Err(Error::io(
                &self.training_image,
                std::io::Error::new(std::io::ErrorKind::NotFound, "training image not found"),
            ));
        }
        if self.growth.region_samples < 8 {
            return bad("region_samples must be at least 8".into());
        }
        match self.grid {
            GridChoice::Dims(d) if d.contains(&0) => {
                return bad("grid dims must be positive".into())
            }
            GridChoice::Spacing(s) if !(s > 0.0 && s.is_finite()) => {
                return bad("grid spacing must be positive".into())
            }
            _ => {}
        }
        self.channel
            .check()
            .map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemEntry {
    pub lobe: usize,
    pub system: usize,
    pub seed: u64,
    pub nodes: usize,
    pub edges: usize,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LobeEntry {
    pub lobe: usize,
    pub lobe_cells: usize,
    pub channel_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub seed_stride: u64,
    pub seed_rule: String,
    pub inputs: Vec<FileEntry>,
    pub outputs: Vec<FileEntry>,
    pub systems: Vec<SystemEntry>,
    pub lobes: Vec<LobeEntry>,
    pub warnings: Vec<String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub manifest: Manifest,
    pub grid: LabeledGrid3,
    pub skeletons: Vec<Skeleton>,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<FileEntry>,
}

impl Writer<'_> {
    fn put(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_file(&self.dir.join(name), bytes)?;
        self.files.push(FileEntry {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }
}

fn input_entry(path: &Path) -> Result<FileEntry> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(FileEntry {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
        bytes: bytes.len() as u64,
    })
}

fn grid_spec(choice: GridChoice, lobes: &[Lobe]) -> Result<GridSpec> {
    let (lo, hi) = lobes.iter().map(Lobe::bounds).fold(
        (
            Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), (a, b)| {
            (
                Point3::new(lo.x.min(a.x), lo.y.min(a.y), lo.z.min(a.z)),
                Point3::new(hi.x.max(b.x), hi.y.max(b.y), hi.z.max(b.z)),
            )
        },
    );
    match choice {
        GridChoice::Dims(d) => GridSpec::fit(lo, hi, d),
        GridChoice::Spacing(s) => GridSpec::covering(lo, hi, s),
    }
}

/// Runs the whole pipeline and writes every output into `out_dir`. Also
/// returns the results for callers that want to inspect them.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    cfg.check()?;
    let mut w = Writer {
        dir: out_dir,
        files: vec![],
    };
    let mut warnings = Vec::new();

    let (training, _) = skeletonize_file(
        &cfg.training_image,
        cfg.invert,
        (cfg.root_hint[0], cfg.root_hint[1]),
        cfg.prune_length,
    )
    .map_err(|e| e.in_stage("skeletonize"))?;
    let (stats, stat_warnings) = stats_with_warnings(&training).map_err(|e| e.in_stage("stats"))?;
    warnings.extend(stat_warnings);

    let lobes = cfg
        .lobes
        .iter()
        .map(Lobe::build)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("lobe"))?;
    let regions = lobes
        .iter()
        .map(|l| l.region_polygon(cfg.growth.region_samples))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("lobe"))?;

    let jobs: Vec<(usize, usize)> = (0..lobes.len())
        .flat_map(|l| (0..cfg.systems_per_lobe).map(move |s| (l, s)))
        .collect();
    let skeletons = jobs
        .par_iter()
        .map(|&(l, s)| {
            let lobe = &lobes[l];
            let [fx, fy] = cfg.growth.root_local;
            let local = Point2::new(fx * lobe.length(), fy * lobe.w(fx * lobe.length()));
            let root = lobe.to_world(local);
            let mut gc = GrowthConfig::new(cfg.growth.max_bif_steps, root, lobe.axis());
            gc.root_mark = cfg.growth.root_mark;
            gc.min_edge_length = cfg.growth.min_edge_length;
            gc.region = Some(regions[l].clone());
            synthesize(&stats, &gc, derive_seed(cfg.seed, l, s))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("synthesize"))?;

    let spec = grid_spec(cfg.grid, &lobes).map_err(|e| e.in_stage("rasterize"))?;
    warnings.extend(resolution_warnings(&spec, &[cfg.channel]));
    let mut grid = LabeledGrid3::new(spec);
    let mut lobe_entries = Vec::new();
    for (l, lobe) in lobes.iter().enumerate() {
        let vols = jobs
            .iter()
            .zip(&skeletons)
            .filter(|((jl, _), _)| *jl == l)
            .map(|(_, sk)| ChannelVolume::new(sk, &cfg.channel))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.in_stage("rasterize"))?;
        let mut own = LabeledGrid3::new(spec);
        rasterize_into(&mut own, lobe, &vols);
        let entry = LobeEntry {
            lobe: l,
            lobe_cells: own.count(LOBE),
            channel_cells: own.count(CHANNEL),
        };
        if entry.channel_cells == 0 {
            warnings.push(format!("lobe {l} has no channel cells at this resolution"));
        }
        lobe_entries.push(entry);
        grid.merge_max(&own).map_err(|e| e.in_stage("rasterize"))?;
    }

    let write = |w: &mut Writer| -> Result<Vec<SystemEntry>> {
        w.put("training_skeleton.csv", write_csv(&training).as_bytes())?;
        w.put("stats.json", stats.to_json().as_bytes())?;
        for (l, r) in regions.iter().enumerate() {
            w.put(&format!("lobe{l}_region.json"), region_json(r).as_bytes())?;
        }
        let mut systems = Vec::new();
        for (&(l, s), sk) in jobs.iter().zip(&skeletons) {
            let file = format!("lobe{l}_system{s}.csv");
            w.put(&file, write_csv(sk).as_bytes())?;
            w.put(
                &format!("lobe{l}_system{s}.ppm"),
                &plot::render(sk, Some(&regions[l]), 512).to_ppm(),
            )?;
            systems.push(SystemEntry {
                lobe: l,
                system: s,
                seed: derive_seed(cfg.seed, l, s),
                nodes: sk.node_count(),
                edges: sk.edge_count(),
                file,
            });
        }
        w.put("model.json", grid.header_json().as_bytes())?;
        w.put("model.raw", grid.labels())?;
        Ok(systems)
    };
    let systems = write(&mut w).map_err(|e| e.in_stage("write"))?;

    let manifest = Manifest {
        seed: cfg.seed,
        seed_stride: SEED_STRIDE,
        seed_rule: "seed + lobe * seed_stride + system".into(),
        inputs: vec![input_entry(&cfg.training_image).map_err(|e| e.in_stage("write"))?],
        outputs: w.files,
        systems,
        lobes: lobe_entries,
        warnings,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialize") + "\n";
    write_file(&out_dir.join(MANIFEST_FILE), text.as_bytes()).map_err(|e| e.in_stage("write"))?;
    Ok(RunOutput {
        manifest,
        grid,
        skeletons,
    })
}

/// Re-hashes every file listed in `dir/manifest.json`. Returns one message
/// per missing or changed file; empty means the run directory is intact.
pub fn verify_manifest(dir: &Path) -> Result<Vec<String>> {
    let path = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::parse("manifest", e))?;
    let mut problems = Vec::new();
    let mut seen = BTreeMap::new();
    for f in &m.outputs {
        if seen.insert(f.path.as_str(), ()).is_some() {
            problems.push(format!("{}: listed twice", f.path));
        }
        match std::fs::read(dir.join(&f.path)) {
            Ok(b) if sha256_hex(&b) == f.sha256 => {}
            Ok(_) => problems.push(format!("{}: hash mismatch", f.path)),
            Err(e) => problems.push(format!("{}: {e}", f.path)),
        }
    }
    Ok(problems)
}

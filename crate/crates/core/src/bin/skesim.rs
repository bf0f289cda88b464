use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use skesim::geom::{Point2, Vec2};
use skesim::pipeline::{self, RunConfig};
use skesim::raster::write_file;
use skesim::skeleton::{read_csv, write_csv};
use skesim::stats::TrainingStats;
use skesim::synth::{synthesize, GrowthConfig};
use skesim::{Error, Result};

#[derive(Parser)]
#[command(
    name = "skesim",
    version,
    about = "Skeleton-based channel system simulation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Thin a training image and write its skeleton graph as CSV.
    Skeletonize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Pixel (column,row) where the channel system enters.
        #[arg(long, value_parser = parse_pair::<usize>)]
        root_hint: (usize, usize),
        #[arg(long)]
        out: PathBuf,
        /// Also write the one-pixel-wide skeleton as PBM.
        #[arg(long)]
        thinned: Option<PathBuf>,
        /// Treat light pixels as channel.
        #[arg(long)]
        invert: bool,
        /// Spurs shorter than this many pixels are removed.
        #[arg(long, default_value_t = 3)]
        prune: usize,
    },
    /// Fit angle and length distributions to a skeleton CSV.
    Stats {
        #[arg(long)]
        skeleton: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grow one realization inside a region polygon.
    Synth {
        #[arg(long)]
        stats: PathBuf,
        #[arg(long)]
        region: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Root point x,y; defaults to the region's first vertex.
        #[arg(long, value_parser = parse_pair::<f64>)]
        root: Option<(f64, f64)>,
        /// Inflow direction x,y; defaults to toward the vertex average.
        #[arg(long, value_parser = parse_pair::<f64>)]
        inflow: Option<(f64, f64)>,
        #[arg(long, default_value_t = 2)]
        root_mark: u8,
        #[arg(long, default_value_t = 1.0)]
        min_edge: f64,
    },
    /// Run the full pipeline from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> std::result::Result<(T, T), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated values, got {s:?}"))?;
    let p = |v: &str| {
        v.trim()
            .parse::<T>()
            .map_err(|_| format!("cannot parse {v:?}"))
    };
    Ok((p(a)?, p(b)?))
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.into(),
        source: e,
    })
}

fn execute(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Skeletonize {
            input,
            root_hint,
            out,
            thinned,
            invert,
            prune,
        } => {
            let (sk, ps) = pipeline::skeletonize_file(&input, invert, root_hint, prune)?;
            write_file(&out, write_csv(&sk).as_bytes())?;
            if let Some(path) = thinned {
                write_file(&path, &ps.bitmap().to_pbm())?;
            }
            eprintln!("{} nodes, {} edges", sk.node_count(), sk.edge_count());
        }
        Cmd::Stats { skeleton, out } => {
            let sk = read_csv(&read_text(&skeleton)?)?;
            let (stats, warnings) = pipeline::stats_with_warnings(&sk)?;
            warn_all(&warnings);
            write_file(&out, stats.to_json().as_bytes())?;
        }
        Cmd::Synth {
            stats,
            region,
            seed,
            steps,
            out,
            plot,
            root,
            inflow,
            root_mark,
            min_edge,
        } => {
            let stats = TrainingStats::load(&stats)?;
            let region = pipeline::load_region(&region)?;
            let (p0, d0) = pipeline::default_root(&region)?;
            let p = root.map_or(p0, |(x, y)| Point2::new(x, y));
            let d = inflow.map_or(d0, |(x, y)| Vec2::new(x, y));
            let mut cfg = GrowthConfig::new(steps, p, d).with_region(region.clone());
            cfg.root_mark = root_mark;
            cfg.min_edge_length = min_edge;
            let sk = synthesize(&stats, &cfg, seed)?;
            write_file(&out, write_csv(&sk).as_bytes())?;
            if let Some(path) = plot {
                write_file(
                    &path,
                    &skesim::plot::render(&sk, Some(&region), 512).to_ppm(),
                )?;
            }
        }
        Cmd::Run { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            let res = pipeline::run(&cfg, &dir)?;
            warn_all(&res.manifest.warnings);
            eprintln!(
                "{} systems in {} lobes written to {}",
                res.manifest.systems.len(),
                res.manifest.lobes.len(),
                dir.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

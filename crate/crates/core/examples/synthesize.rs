//! Grows six realizations inside the default lobe outline from the
//! training-tree statistics and writes each as CSV and PPM.
//!
//! Usage: cargo run --example synthesize [OUT_DIR]

use std::path::PathBuf;

use skesim::demo;
use skesim::geom::Point2;
use skesim::lobe::{Lobe, LobeParams};
use skesim::pipeline::{skeletonize, stats_with_warnings};
use skesim::raster::write_file;
use skesim::skeleton::{validate, write_csv};
use skesim::synth::{synthesize_traced, GrowthConfig};

fn main() -> skesim::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "target/examples/synthesize".into())
        .into();
    let (img, root) = demo::training_image();
    let (training, _) = skeletonize(&img, root, 3)?;
    let (stats, _) = stats_with_warnings(&training)?;

    let lobe = Lobe::build(&LobeParams::new(480.0, 320.0, 48.0))?;
    let region = lobe.region_polygon(64)?;
    let start = lobe.to_world(Point2::new(0.05 * lobe.length(), 0.0));
    let cfg = GrowthConfig::new(8, start, lobe.axis()).with_region(region.clone());

    for seed in 1..=6u64 {
        let t = std::time::Instant::now();
        let (sk, steps) = synthesize_traced(&stats, &cfg, seed)?;
        let clipped = steps
            .iter()
            .flat_map(|s| &s.outcomes)
            .filter(|o| o.accepted() && !o.is_clean())
            .count();
        println!(
            "seed {seed}: {} edges, {} nodes, {} steps, {} truncated, {} violations, {:?}",
            sk.edge_count(),
            sk.node_count(),
            steps.len(),
            clipped,
            validate(&sk).len(),
            t.elapsed()
        );
        write_file(
            &out.join(format!("realization_{seed}.csv")),
            write_csv(&sk).as_bytes(),
        )?;
        write_file(
            &out.join(format!("realization_{seed}.ppm")),
            &skesim::plot::render(&sk, Some(&region), 512).to_ppm(),
        )?;
    }
    println!("wrote {}", out.display());
    Ok(())
}

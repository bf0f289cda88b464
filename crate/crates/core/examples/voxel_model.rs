//! Grows one channel system in a lobe, labels a 128 x 128 x 64 grid and
//! writes the grid pair plus a map-view slice.
//!
//! Usage: cargo run --example voxel_model [OUT_DIR]

use std::path::PathBuf;

use skesim::demo;
use skesim::geom::Point2;
use skesim::lobe::{Lobe, LobeParams};
use skesim::pipeline::{skeletonize, stats_with_warnings};
use skesim::raster::write_file;
use skesim::synth::{synthesize, GrowthConfig};
use skesim::volume::{rasterize, ChannelParams, GridSpec, CHANNEL, LOBE};

fn main() -> skesim::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "target/examples/voxel_model".into())
        .into();
    let (img, root) = demo::training_image();
    let (training, _) = skeletonize(&img, root, 3)?;
    let (stats, _) = stats_with_warnings(&training)?;

    let lobe = Lobe::build(&LobeParams::new(480.0, 320.0, 48.0))?;
    let start = lobe.to_world(Point2::new(0.05 * lobe.length(), 0.0));
    let cfg = GrowthConfig::new(8, start, lobe.axis()).with_region(lobe.region_polygon(64)?);
    let sk = synthesize(&stats, &cfg, 42)?;

    let (lo, hi) = lobe.bounds();
    let spec = GridSpec::fit(lo, hi, [128, 128, 64])?;
    let t = std::time::Instant::now();
    let (grid, warnings) = rasterize(&lobe, &[(&sk, ChannelParams::new(12.0, 10.0))], spec)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{} edges; spacing {:.3}; {} lobe cells, {} channel cells; {:?}",
        sk.edge_count(),
        spec.spacing,
        grid.count(LOBE),
        grid.count(CHANNEL),
        t.elapsed()
    );
    let (json, raw) = grid.write(&out.join("model"))?;
    // Highest cell layer lying below the top surface.
    let k = ((-0.5 * spec.spacing - spec.origin.z) / spec.spacing).floor() as usize;
    write_file(&out.join("map_view.ppm"), &grid.slice_ppm(2, k)?)?;
    write_file(&out.join("section.ppm"), &grid.slice_ppm(0, 64)?)?;
    println!("wrote {}, {} and two slices", json.display(), raw.display());
    Ok(())
}

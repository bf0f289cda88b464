//! Skeletonizes the bundled training tree and prints the fitted
//! bifurcation-angle and edge-length distributions.

use skesim::demo;
use skesim::pipeline::{skeletonize, stats_with_warnings};

fn main() -> skesim::Result<()> {
    let (img, root) = demo::training_image();
    let (sk, _) = skeletonize(&img, root, 3)?;
    println!(
        "training skeleton: {} nodes, {} edges",
        sk.node_count(),
        sk.edge_count()
    );
    let (stats, warnings) = stats_with_warnings(&sk)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let deg = |r: f64| r.to_degrees();
    println!(
        "angles: U[{:.1} deg, {:.1} deg] from {} samples",
        deg(stats.angle_dist.lo),
        deg(stats.angle_dist.hi),
        stats.signed_angles.len()
    );
    println!(
        "lengths: U[{:.1}, {:.1}] px from {} samples",
        stats.length_dist.lo,
        stats.length_dist.hi,
        stats.lengths.len()
    );
    print!("{}", stats.to_json());
    Ok(())
}

//! Builds a default and a half-ellipse lobe and prints their tables,
//! volume estimates and outline polygon size.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skesim::geom::Point3;
use skesim::lobe::{Lobe, LobeParams, Template};

fn monte_carlo_volume(lobe: &Lobe, n: usize) -> f64 {
    let (lo, hi) = lobe.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let hits = (0..n)
        .filter(|_| {
            let q = Point3::new(
                rng.gen_range(lo.x..hi.x),
                rng.gen_range(lo.y..hi.y),
                rng.gen_range(lo.z..hi.z),
            );
            lobe.contains(q)
        })
        .count();
    (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z) * hits as f64 / n as f64
}

fn main() -> skesim::Result<()> {
    for template in [Template::Default, Template::HalfEllipse] {
        let mut p = LobeParams::new(480.0, 320.0, 48.0);
        p.template = template;
        let lobe = Lobe::build(&p)?;
        println!(
            "{template:?} lobe, L = {}, W = {}, D = {}",
            p.length, p.width, p.depth
        );
        for f in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let x = f * lobe.length();
            println!(
                "  x = {x:6.1}: half width {:6.2}, depth {:5.2}",
                lobe.w(x),
                lobe.d(x)
            );
        }
        let ellipsoid =
            std::f64::consts::PI * 2.0 / 3.0 * (p.length / 2.0) * (p.width / 2.0) * p.depth;
        println!(
            "  volume ~ {:.0} (half ellipsoid with the same extents: {ellipsoid:.0})",
            monte_carlo_volume(&lobe, 200_000)
        );
        println!(
            "  outline polygon: {} vertices",
            lobe.region_polygon(64)?.vertices().len()
        );
    }
    Ok(())
}

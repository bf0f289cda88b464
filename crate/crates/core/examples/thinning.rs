//! Thins a few synthetic shapes and reports pixel counts and checks.

use skesim::demo;
use skesim::thinning::{classify_pixels, thin};

fn main() -> skesim::Result<()> {
    let shapes = [
        ("bar", demo::bar(64, 32, 48, 9)),
        ("disk", demo::disk(64, 20.0)),
        ("y", demo::y_shape(96, 3.0)),
        ("plus", demo::plus_shape(96, 3.0)),
        ("tree", demo::random_tree(256, 5, 3.0, 11).0),
    ];
    for (name, img) in shapes {
        let t = std::time::Instant::now();
        let ps = thin(&img)?;
        let elapsed = t.elapsed();
        let classes = classify_pixels(&ps);
        let problems = ps.check_against(&img);
        println!(
            "{name:>5}: {} -> {} pixels, {} ends, {} branch pixels, {} problems, {elapsed:?}",
            img.count(),
            ps.bitmap().count(),
            classes.end_points.len(),
            classes.branch_points.len(),
            problems.len()
        );
    }
    Ok(())
}

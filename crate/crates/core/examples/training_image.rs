//! Writes the bundled training tree as a PGM (dark channels on white).
//!
//! Usage: cargo run --example training_image [OUT.pgm]

use skesim::demo;
use skesim::raster::write_file;

fn main() -> skesim::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "data/training_tree.pgm".into());
    let (img, (x, y)) = demo::training_image();
    write_file(out.as_ref(), &img.to_pgm())?;
    println!(
        "wrote {out} ({}x{}), trunk enters at pixel {x},{y}",
        img.width(),
        img.height()
    );
    Ok(())
}

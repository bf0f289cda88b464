//! Runs a scenario config end to end and verifies the manifest.
//!
//! Usage: cargo run --example full_run [CONFIG] [OUT_DIR]

use std::path::PathBuf;

use skesim::pipeline::{run, verify_manifest, RunConfig};

fn main() -> skesim::Result<()> {
    let mut args = std::env::args().skip(1);
    let config: PathBuf = args
        .next()
        .unwrap_or_else(|| "data/scenarios/one_lobe_three_systems.json".into())
        .into();
    let cfg = RunConfig::load(&config)?;
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| cfg.output_dir.clone());
    let t = std::time::Instant::now();
    let res = run(&cfg, &out)?;
    println!("finished in {:?}", t.elapsed());
    for s in &res.manifest.systems {
        println!(
            "  lobe {} system {}: seed {}, {} edges -> {}",
            s.lobe, s.system, s.seed, s.edges, s.file
        );
    }
    for l in &res.manifest.lobes {
        println!(
            "  lobe {}: {} lobe cells, {} channel cells",
            l.lobe, l.lobe_cells, l.channel_cells
        );
    }
    for w in &res.manifest.warnings {
        eprintln!("warning: {w}");
    }
    let problems = verify_manifest(&out)?;
    println!(
        "manifest: {} outputs, {} problems",
        res.manifest.outputs.len(),
        problems.len()
    );
    Ok(())
}

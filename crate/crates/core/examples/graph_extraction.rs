//! Extracts skeleton graphs from a Y and a plus image and prints every
//! node and edge.

use skesim::demo;
use skesim::pipeline::skeletonize;
use skesim::skeleton::write_csv;

fn main() -> skesim::Result<()> {
    let y = demo::y_shape(60, 2.5);
    let (sk, _) = skeletonize(&y, (30, 54), 3)?;
    println!(
        "Y image: {} nodes, {} edges",
        sk.node_count(),
        sk.edge_count()
    );
    for n in sk.nodes() {
        println!(
            "  node {} at ({:.1}, {:.1}) mark {}",
            n.id, n.p.x, n.p.y, n.mark
        );
    }
    print!("{}", write_csv(&sk));

    let plus = demo::plus_shape(60, 2.5);
    let (sk, _) = skeletonize(&plus, (6, 30), 3)?;
    let junction = sk.nodes().iter().max_by_key(|n| n.degree()).expect("nodes");
    println!(
        "plus image: {} edges; junction has {} incident edges and mark {}",
        sk.edge_count(),
        junction.degree(),
        junction.mark
    );
    Ok(())
}

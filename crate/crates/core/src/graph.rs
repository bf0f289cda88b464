//! Turns a pixel skeleton into a straight-edge [`Skeleton`].
//!
//! Branch and end pixels (plus the pixel nearest the root hint) become
//! nodes, clustered when they lie within `merge_radius` of each other. Each
//! maximal pixel path between two clusters becomes one straight edge. Edges
//! are oriented away from the root in breadth-first order.
//!
//! Skeleton coordinates put `y` up: pixel `(col, row)` of an image with
//! `height` rows maps to the point `(col, height - 1 - row)`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::geom::{distance_to_segment, Point2};
use crate::raster::BinaryImage;
use crate::skeleton::{validate, NodeId, Skeleton, ViolationKind};
use crate::thinning::{classify_pixels, mask_at, PixelSkeleton, RING, SIMPLE};

type Px = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    /// Spurs (end-to-branch paths) with fewer pixels than this are removed.
    pub prune_length: usize,
    /// Node pixels closer than this (Euclidean, pixels) form one node.
    pub merge_radius: f64,
    /// How far the root hint may be from the nearest skeleton pixel.
    pub root_snap_radius: f64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            prune_length: 3,
            merge_radius: 2.0,
            root_snap_radius: 5.0,
        }
    }
}

pub fn pixel_to_point(px: Px, height: usize) -> Point2 {
    Point2::new(px.0 as f64, (height - 1 - px.1) as f64)
}

pub fn point_to_pixel(p: Point2, height: usize) -> (i64, i64) {
    (
        p.x.round() as i64,
        (height as f64 - 1.0 - p.y).round() as i64,
    )
}

fn neighbors(img: &BinaryImage, (x, y): Px) -> impl Iterator<Item = Px> + '_ {
    RING.iter().filter_map(move |(dx, dy)| {
        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
        img.get_i(nx, ny).then_some((nx as usize, ny as usize))
    })
}

fn snap_root(img: &BinaryImage, hint: Px, radius: f64) -> Result<Px> {
    let (hx, hy) = (hint.0 as f64, hint.1 as f64);
    img.foreground()
        .map(|(x, y)| {
            (
                ((x as f64 - hx).powi(2) + (y as f64 - hy).powi(2)).sqrt(),
                (x, y),
            )
        })
        .filter(|(d, _)| *d <= radius)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, p)| p)
        .ok_or_else(|| {
            Error::InvalidRoot(format!(
                "no skeleton pixel within {radius} px of ({}, {})",
                hint.0, hint.1
            ))
        })
}

/// Removes end-to-branch paths shorter than `prune_length` pixels. The path
/// holding `keep` is never removed.
fn prune_spurs(img: &mut BinaryImage, prune_length: usize, keep: Px) {
    if prune_length == 0 {
        return;
    }
    loop {
        let ps = PixelSkeleton::from_bitmap(img.clone());
        let ends = classify_pixels(&ps).end_points;
        let mut removed = false;
        for end in ends {
            let mut path = vec![end];
            let mut prev = end;
            let mut cur = end;
            let mut junction = None;
            let reached_branch = loop {
                let next: Vec<Px> = neighbors(img, cur).filter(|&n| n != prev).collect();
                if path.len() > prune_length {
                    break false;
                }
                match next.as_slice() {
                    [n] => {
                        if neighbors(img, *n).count() >= 3 {
                            junction = Some(*n);
                            break true;
                        }
                        prev = cur;
                        cur = *n;
                        path.push(cur);
                    }
                    // Another end, or this end sits next to a junction.
                    [] => break false,
                    _ => break path.len() > 1 || neighbors(img, end).count() >= 3,
                }
            };
            if reached_branch && path.len() < prune_length && !path.contains(&keep) {
                for &(x, y) in &path {
                    img.set(x, y, false);
                }
                if let Some(j) = junction {
                    remove_nub(img, j);
                }
                removed = true;
            }
        }
        if !removed {
            return;
        }
    }
}

/// Deletes `p` when it only bridges neighbors that stay connected and
/// none of them would become an end pixel.
fn remove_nub(img: &mut BinaryImage, p: Px) {
    let around: Vec<Px> = neighbors(img, p).collect();
    if around.len() < 2 || !SIMPLE[mask_at(img, p.0, p.1) as usize] {
        return;
    }
    img.set(p.0, p.1, false);
    if around.iter().any(|&n| neighbors(img, n).count() < 2) {
        img.set(p.0, p.1, true);
    }
}

struct RawGraph {
    nodes: Vec<Vec<Px>>,
    points: Vec<Point2>,
    edges: Vec<(usize, usize, Vec<Px>)>,
}

impl RawGraph {
    fn add_node(&mut self, pixels: Vec<Px>, height: usize) -> usize {
        let n = pixels.len() as f64;
        let (sx, sy) = pixels
            .iter()
            .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x as f64, b + y as f64));
        let c = (sx / n, sy / n);
        self.points
            .push(Point2::new(c.0, height as f64 - 1.0 - c.1));
        self.nodes.push(pixels);
        self.nodes.len() - 1
    }

    /// Adds the path as one edge, or as two edges meeting at its middle
    /// pixel when it would duplicate an existing pair or loop back.
    fn add_path(&mut self, a: usize, b: usize, path: Vec<Px>, height: usize) {
        let duplicate = self
            .edges
            .iter()
            .any(|(x, y, _)| (*x, *y) == (a, b) || (*x, *y) == (b, a));
        if a == b || duplicate {
            if path.len() < 3 {
                return;
            }
            let mid = path.len() / 2;
            let m = self.add_node(vec![path[mid]], height);
            self.edges.push((a, m, path[..mid].to_vec()));
            self.edges.push((m, b, path[mid + 1..].to_vec()));
        } else {
            self.edges.push((a, b, path));
        }
    }

    /// Splits edge `i` at the path pixel farthest from its chord.
    fn subdivide(&mut self, i: usize, height: usize) -> bool {
        let (a, b, path) = self.edges[i].clone();
        if path.is_empty() {
            return false;
        }
        let (pa, pb) = (self.points[a], self.points[b]);
        let far = (0..path.len())
            .max_by(|&x, &y| {
                let dx = distance_to_segment(pixel_to_point(path[x], height), pa, pb);
                let dy = distance_to_segment(pixel_to_point(path[y], height), pa, pb);
                dx.total_cmp(&dy).then(y.cmp(&x))
            })
            .expect("non-empty path");
        let m = self.add_node(vec![path[far]], height);
        self.edges[i] = (a, m, path[..far].to_vec());
        self.edges.push((m, b, path[far + 1..].to_vec()));
        true
    }
}

/// Builds the training skeleton from a connected pixel skeleton.
/// `root_hint` is a pixel coordinate `(col, row)`.
pub fn extract_graph(ps: &PixelSkeleton, root_hint: Px, opts: &ExtractOptions) -> Result<Skeleton> {
    let mut img = ps.bitmap().clone();
    let sizes = img.component_sizes();
    match sizes.len() {
        0 => return Err(Error::InvalidInput("pixel skeleton is empty".into())),
        1 => {}
        _ => return Err(Error::MultipleComponents { sizes }),
    }
    let height = img.height();
    let root_px = snap_root(&img, root_hint, opts.root_snap_radius)?;
    prune_spurs(&mut img, opts.prune_length, root_px);

    // Node pixels and their clusters.
    let classes = classify_pixels(&PixelSkeleton::from_bitmap(img.clone()));
    let mut node_px: Vec<Px> = classes.branch_points;
    node_px.extend(classes.end_points);
    node_px.push(root_px);
    node_px.sort_by_key(|&(x, y)| (y, x));
    node_px.dedup();

    let index: HashMap<Px, usize> = node_px.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..node_px.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = i;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    let reach = opts.merge_radius.floor() as i64;
    for (i, &(x, y)) in node_px.iter().enumerate() {
        for dy in -reach..=reach {
            for dx in -reach..=reach {
                if (dx * dx + dy * dy) as f64 > opts.merge_radius * opts.merge_radius {
                    continue;
                }
                let q = (x as i64 + dx, y as i64 + dy);
                if q.0 < 0 || q.1 < 0 {
                    continue;
                }
                if let Some(&j) = index.get(&(q.0 as usize, q.1 as usize)) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
    }
    let mut clusters: BTreeMap<usize, Vec<Px>> = BTreeMap::new();
    for i in 0..node_px.len() {
        let r = find(&mut parent, i);
        clusters.entry(r).or_default().push(node_px[i]);
    }

    let mut g = RawGraph {
        nodes: vec![],
        points: vec![],
        edges: vec![],
    };
    let mut cluster_of: HashMap<Px, usize> = HashMap::new();
    for pixels in clusters.into_values() {
        let id = g.nodes.len();
        for &p in &pixels {
            cluster_of.insert(p, id);
        }
        g.add_node(pixels, height);
    }
    let cluster_count = g.nodes.len();

    // Trace pixel paths between clusters.
    let mut visited: HashSet<Px> = HashSet::new();
    let mut direct: HashSet<(usize, usize)> = HashSet::new();
    for c in 0..cluster_count {
        let pixels = g.nodes[c].clone();
        for q in pixels {
            for n in neighbors(&img, q).collect::<Vec<_>>() {
                if let Some(&cn) = cluster_of.get(&n) {
                    if cn != c && direct.insert((c.min(cn), c.max(cn))) {
                        g.add_path(c, cn, vec![], height);
                    }
                    continue;
                }
                if !visited.insert(n) {
                    continue;
                }
                let mut path = vec![n];
                let (mut prev, mut cur) = (q, n);
                let end = loop {
                    let next = neighbors(&img, cur).find(|&m| m != prev && !path.contains(&m));
                    match next {
                        None => break None,
                        Some(m) => {
                            if let Some(&cm) = cluster_of.get(&m) {
                                break Some(cm);
                            }
                            if !visited.insert(m) {
                                break None;
                            }
                            path.push(m);
                            prev = cur;
                            cur = m;
                        }
                    }
                };
                if let Some(cm) = end {
                    g.add_path(c, cm, path, height);
                }
            }
        }
    }

    // Chords of strongly curved paths can cross other edges; split them
    // until the straight-edge graph is planar.
    let root_cluster = cluster_of[&root_px];
    let mut sk = orient(&g, root_cluster)?;
    for _ in 0..4 * (g.edges.len() + 1) {
        let bad: Vec<_> = validate(&sk)
            .into_iter()
            .filter(|v| v.kind == ViolationKind::Planarity)
            .collect();
        if bad.is_empty() {
            break;
        }
        // Map skeleton edge ids back to raw edges through endpoints.
        let mut split_any = false;
        for e in &bad[0].edges {
            let (f, s) = (sk.edge(*e).father, sk.edge(*e).son);
            let (pf, psn) = (sk.node(f).p, sk.node(s).p);
            if let Some(i) = g.edges.iter().position(|(a, b, _)| {
                let (pa, pb) = (g.points[*a], g.points[*b]);
                (pa == pf && pb == psn) || (pa == psn && pb == pf)
            }) {
                if g.subdivide(i, height) {
                    split_any = true;
                    break;
                }
            }
        }
        if !split_any {
            break;
        }
        sk = orient(&g, root_cluster)?;
    }

    let problems = validate(&sk);
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(|v| v.to_string()).collect();
        return Err(Error::InvalidInput(format!(
            "extracted graph is not a valid skeleton: {}",
            list.join("; ")
        )));
    }
    Ok(sk)
}

/// Orients raw edges away from `root` in breadth-first order and renumbers
/// nodes in that order.
fn orient(g: &RawGraph, root: usize) -> Result<Skeleton> {
    let n = g.nodes.len();
    let mut adj: Vec<Vec<usize>> = vec![vec![]; n];
    for (i, (a, b, _)) in g.edges.iter().enumerate() {
        adj[*a].push(i);
        adj[*b].push(i);
    }
    let mut order = vec![usize::MAX; n];
    let mut queue = VecDeque::from([root]);
    order[root] = 0;
    let mut next = 1;
    while let Some(u) = queue.pop_front() {
        for &e in &adj[u] {
            let (a, b, _) = &g.edges[e];
            let v = if *a == u { *b } else { *a };
            if order[v] == usize::MAX {
                order[v] = next;
                next += 1;
                queue.push_back(v);
            }
        }
    }
    if next != n {
        return Err(Error::MultipleComponents {
            sizes: vec![next, n - next],
        });
    }
    let mut by_order = vec![0; n];
    for (raw, &o) in order.iter().enumerate() {
        by_order[o] = raw;
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|(a, b, _)| {
            let (oa, ob) = (order[*a], order[*b]);
            if oa < ob {
                (oa, ob)
            } else {
                (ob, oa)
            }
        })
        .collect();
    edges.sort_unstable();

    let root_p = g.points[root];
    let inflow = edges
        .first()
        .filter(|(f, _)| *f == 0)
        .and_then(|(_, s)| (g.points[by_order[*s]] - root_p).normalized())
        .unwrap_or(Point2::new(1.0, 0.0));
    let mut sk = Skeleton::builder(root_p, inflow)?;
    for &raw in &by_order[1..] {
        sk.add_node(g.points[raw]);
    }
    for (f, s) in edges {
        sk.add_edge(NodeId(f), NodeId(s))?;
    }
    sk.recompute_marks();
    Ok(sk)
}

/// Draws the skeleton's edges as 8-connected one-pixel lines.
pub fn rasterize_skeleton(sk: &Skeleton, width: usize, height: usize) -> Result<BinaryImage> {
    let mut img = BinaryImage::new(width, height)?;
    if sk.edge_count() == 0 {
        let (x, y) = point_to_pixel(sk.node(sk.root()).p, height);
        img.set_i(x, y, true);
    }
    for e in sk.edges() {
        let (a, b) = sk.segment(e.id);
        let (x0, y0) = point_to_pixel(a, height);
        let (x1, y1) = point_to_pixel(b, height);
        img.draw_line(x0, y0, x1, y1);
    }
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(rows: &[&str]) -> PixelSkeleton {
        PixelSkeleton::from_bitmap(BinaryImage::from_ascii(rows).unwrap())
    }

    #[test]
    fn straight_line() {
        let p = ps(&["..........", ".########.", ".........."]);
        let sk = extract_graph(&p, (1, 1), &ExtractOptions::default()).unwrap();
        assert_eq!(sk.edge_count(), 1);
        assert_eq!(sk.node_count(), 2);
        assert!(sk.nodes().iter().all(|n| n.mark == 1));
        assert_eq!(sk.edge_length(sk.edges()[0].id), 7.0);
        assert_eq!(sk.node(sk.root()).p, Point2::new(1.0, 1.0));
        assert_eq!(sk.root_inflow(), Point2::new(1.0, 0.0));
    }

    fn y_shape() -> PixelSkeleton {
        ps(&[
            "#.......#",
            ".#.....#.",
            "..#...#..",
            "...#.#...",
            "....#....",
            "....#....",
            "....#....",
            "....#....",
            "....#....",
        ])
    }

    #[test]
    fn y_shape_from_tail() {
        let sk = extract_graph(&y_shape(), (4, 8), &ExtractOptions::default()).unwrap();
        assert_eq!(sk.edge_count(), 3);
        assert_eq!(sk.node_count(), 4);
        let marks: Vec<u8> = sk.nodes().iter().map(|n| n.mark).collect();
        assert_eq!(marks.iter().filter(|&&m| m == 3).count(), 1);
        assert_eq!(marks.iter().filter(|&&m| m == 1).count(), 3);
        // Manual graph: root (4,0) -> junction (4,4) -> (0,8) and (8,8).
        assert_eq!(sk.node(sk.root()).p, Point2::new(4.0, 0.0));
        let junction = sk.node(NodeId(1));
        assert_eq!(junction.p, Point2::new(4.0, 4.0));
        assert_eq!(junction.mark, 3);
        let mut leaves: Vec<(f64, f64)> = sk.nodes()[2..].iter().map(|n| (n.p.x, n.p.y)).collect();
        leaves.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(leaves, vec![(0.0, 8.0), (8.0, 8.0)]);
        assert!(sk.edges().iter().all(|e| e.father < e.son));
    }

    #[test]
    fn plus_shape_clamps_mark() {
        let p = ps(&[
            "....#....",
            "....#....",
            "....#....",
            "....#....",
            "#########",
            "....#....",
            "....#....",
            "....#....",
            "....#....",
        ]);
        let sk = extract_graph(&p, (0, 4), &ExtractOptions::default()).unwrap();
        assert_eq!(sk.edge_count(), 4);
        let center = sk.nodes().iter().find(|n| n.degree() == 4).unwrap();
        assert_eq!(center.mark, 3);
        assert_eq!(center.p, Point2::new(4.0, 4.0));
        assert_eq!(sk.nodes().iter().filter(|n| n.mark == 1).count(), 4);
    }

    #[test]
    fn errors() {
        let two = ps(&["##...##"]);
        assert!(matches!(
            extract_graph(&two, (0, 0), &ExtractOptions::default()),
            Err(Error::MultipleComponents { ref sizes }) if sizes == &vec![2, 2]
        ));
        let line = ps(&["..........", ".########.", ".........."]);
        assert!(matches!(
            extract_graph(
                &line,
                (1, 9),
                &ExtractOptions {
                    ..Default::default()
                }
            ),
            Err(Error::InvalidRoot(_))
        ));
        let line = PixelSkeleton::from_bitmap(
            BinaryImage::from_ascii(&["#########", ".........", "........."]).unwrap(),
        );
        assert!(extract_graph(&line, (4, 2), &ExtractOptions::default()).is_ok());
    }

    #[test]
    fn root_in_the_middle_of_a_path() {
        let p = ps(&["..........", ".########.", ".........."]);
        let sk = extract_graph(&p, (4, 0), &ExtractOptions::default()).unwrap();
        assert_eq!(sk.edge_count(), 2);
        assert_eq!(sk.node(sk.root()).p, Point2::new(4.0, 1.0));
        assert_eq!(sk.node(sk.root()).mark, 2);
    }

    #[test]
    fn short_spurs_are_pruned() {
        let p = ps(&[
            "........#......",
            "........#......",
            "........#.....#",
            "........#....#.",
            "#############..",
            "...............",
        ]);
        // The spur above the junction pixel is three pixels long.
        let opts = |prune_length| ExtractOptions {
            prune_length,
            ..Default::default()
        };
        assert_eq!(extract_graph(&p, (0, 4), &opts(4)).unwrap().edge_count(), 1);
        assert_eq!(extract_graph(&p, (0, 4), &opts(3)).unwrap().edge_count(), 3);
        assert_eq!(extract_graph(&p, (0, 4), &opts(0)).unwrap().edge_count(), 3);
        // The root's own spur survives.
        assert_eq!(extract_graph(&p, (8, 0), &opts(4)).unwrap().edge_count(), 3);
    }

    #[test]
    fn loop_gets_an_extra_node() {
        let p = ps(&[
            "..#####..",
            ".#.....#.",
            ".#.....#.",
            "..#####..",
            "....#....",
            "....#....",
            "....#....",
        ]);
        let sk = extract_graph(&p, (4, 6), &ExtractOptions::default()).unwrap();
        assert!(validate(&sk).is_empty());
        assert!(sk.edge_count() >= 3);
    }
}

use std::fmt;

use super::{EdgeId, NodeId, Skeleton};
use crate::geom::{segment_contact, Contact, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    MarkRange,
    MarkConsistency,
    Alpha,
    Adjacency,
    DegenerateEdge,
    Disconnected,
    Cycle,
    Planarity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        for n in &self.nodes {
            write!(f, " {n}")?;
        }
        for e in &self.edges {
            write!(f, " {e}")?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

fn v(kind: ViolationKind, nodes: Vec<NodeId>, edges: Vec<EdgeId>, detail: String) -> Violation {
    Violation {
        kind,
        nodes,
        edges,
        detail,
    }
}

/// Checks every skeleton invariant. An empty list means the skeleton is
/// well formed.
pub fn validate(sk: &Skeleton) -> Vec<Violation> {
    let mut out = Vec::new();
    let nodes = sk.nodes();
    let edges = sk.edges();

    if sk.root().0 >= nodes.len() || !nodes[sk.root().0].is_root {
        out.push(v(
            ViolationKind::Adjacency,
            vec![sk.root()],
            vec![],
            "root flag missing".into(),
        ));
        return out;
    }

    for n in nodes {
        if n.is_root != (n.id == sk.root()) {
            out.push(v(
                ViolationKind::Adjacency,
                vec![n.id],
                vec![],
                "stray root flag".into(),
            ));
        }
        if !(1..=3).contains(&n.mark) {
            out.push(v(
                ViolationKind::MarkRange,
                vec![n.id],
                vec![],
                format!("mark {}", n.mark),
            ));
            continue;
        }
        let counted = sk.counted_mark(n.id).max(1);
        if n.mark != counted && !(n.terminal && n.mark == 3) {
            out.push(v(
                ViolationKind::MarkConsistency,
                vec![n.id],
                vec![],
                format!("mark {} but {} incident", n.mark, counted),
            ));
        }
        let arrivals = (n.in_edges.len() + usize::from(n.is_root)).min(2);
        if n.alpha.len() != arrivals || n.alpha.iter().any(|a| (a.norm() - 1.0).abs() > 1e-9) {
            out.push(v(
                ViolationKind::Alpha,
                vec![n.id],
                vec![],
                format!("{} arrival directions, expected {arrivals}", n.alpha.len()),
            ));
        }
    }

    for e in edges {
        let ok = e.father.0 < nodes.len()
            && e.son.0 < nodes.len()
            && nodes[e.father.0].out_edges.contains(&e.id)
            && nodes[e.son.0].in_edges.contains(&e.id);
        if !ok {
            out.push(v(
                ViolationKind::Adjacency,
                vec![e.father, e.son],
                vec![e.id],
                String::new(),
            ));
            return out;
        }
        if e.father == e.son || sk.edge_length(e.id) <= EPS {
            out.push(v(
                ViolationKind::DegenerateEdge,
                vec![e.father, e.son],
                vec![e.id],
                String::new(),
            ));
        }
    }

    // Connectivity ignoring direction.
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![sk.root()];
    seen[sk.root().0] = true;
    while let Some(n) = stack.pop() {
        let node = &nodes[n.0];
        for &e in node.out_edges.iter().chain(&node.in_edges) {
            let ed = edges[e.0];
            let other = if ed.father == n { ed.son } else { ed.father };
            if !seen[other.0] {
                seen[other.0] = true;
                stack.push(other);
            }
        }
    }
    let unreached: Vec<NodeId> = nodes
        .iter()
        .filter(|n| !seen[n.id.0])
        .map(|n| n.id)
        .collect();
    if !unreached.is_empty() {
        out.push(v(
            ViolationKind::Disconnected,
            unreached,
            vec![],
            String::new(),
        ));
    }

    // Directed acyclicity (Kahn).
    let mut indeg: Vec<usize> = nodes.iter().map(|n| n.in_edges.len()).collect();
    let mut queue: Vec<NodeId> = nodes
        .iter()
        .filter(|n| indeg[n.id.0] == 0)
        .map(|n| n.id)
        .collect();
    let mut visited = 0;
    while let Some(n) = queue.pop() {
        visited += 1;
        for &e in &nodes[n.0].out_edges {
            let s = edges[e.0].son;
            indeg[s.0] -= 1;
            if indeg[s.0] == 0 {
                queue.push(s);
            }
        }
    }
    if visited != nodes.len() {
        let cyclic = nodes
            .iter()
            .filter(|n| indeg[n.id.0] > 0)
            .map(|n| n.id)
            .collect();
        out.push(v(ViolationKind::Cycle, cyclic, vec![], String::new()));
    }

    out.extend(planarity_violations(sk));
    out
}

/// Brute-force pairwise check that edges meet only at shared endpoints.
pub(crate) fn planarity_violations(sk: &Skeleton) -> Vec<Violation> {
    let edges = sk.edges();
    let segs: Vec<_> = edges.iter().map(|e| sk.segment(e.id)).collect();
    let boxes: Vec<[f64; 4]> = segs
        .iter()
        .map(|(a, b)| [a.x.min(b.x), a.y.min(b.y), a.x.max(b.x), a.y.max(b.y)])
        .collect();
    let mut out = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi[0] > bj[2] + EPS
                || bj[0] > bi[2] + EPS
                || bi[1] > bj[3] + EPS
                || bj[1] > bi[3] + EPS
            {
                continue;
            }
            let (ei, ej) = (edges[i], edges[j]);
            let (a1, a2) = segs[i];
            let (b1, b2) = segs[j];
            if a1.dist(a2) <= EPS || b1.dist(b2) <= EPS {
                continue;
            }
            let shared: Vec<NodeId> = [ei.father, ei.son]
                .into_iter()
                .filter(|n| *n == ej.father || *n == ej.son)
                .collect();
            let bad = match segment_contact(a1, a2, b1, b2) {
                None => false,
                Some(Contact::Overlap { .. }) => true,
                Some(Contact::Point { point, .. }) => match shared.as_slice() {
                    [s] => point.dist(sk.node(*s).p) > EPS,
                    _ => true,
                },
            };
            if bad {
                out.push(v(
                    ViolationKind::Planarity,
                    vec![],
                    vec![ei.id, ej.id],
                    String::new(),
                ));
            }
        }
    }
    out
}

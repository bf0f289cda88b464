//! The skeleton graph: a planar, directed, rooted graph of straight edges.
//!
//! Every node carries a *mark* in `{1, 2, 3}`: the number of incident edges
//! (arriving plus leaving), clamped to 3. Marks 1 and 2 are expandable by
//! the bifurcation operator; 3 is terminal. The root additionally carries a
//! virtual inflow direction which contributes `root_virtual` arrivals to its
//! mark, so a bare root is already expandable.

mod csv;
mod validate;

pub use self::csv::{format_sig9, read_csv, write_csv};
pub use self::validate::{validate, Violation, ViolationKind};

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point2, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub p: Point2,
    /// Unit directions of the edges arriving at `p` (at most two). The root
    /// stores its virtual inflow first.
    pub alpha: Vec<Vec2>,
    pub mark: u8,
    pub is_root: bool,
    /// Set when the mark was forced to 3 without three incident edges
    /// (clipped at a region boundary, or joined by a truncated edge).
    pub terminal: bool,
    pub in_edges: Vec<EdgeId>,
    pub out_edges: Vec<EdgeId>,
}

impl Node {
    /// Number of real incident edges.
    pub fn degree(&self) -> usize {
        self.in_edges.len() + self.out_edges.len()
    }

    /// Direction new children are measured against.
    pub fn parent_direction(&self) -> Option<Vec2> {
        self.alpha.first().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub father: NodeId,
    pub son: NodeId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    root: NodeId,
    root_inflow: Vec2,
    root_virtual: u8,
}

impl Skeleton {
    /// A bare root. `root_mark` (1 or 2) is the number of virtual arrivals
    /// the inflow direction stands for.
    pub fn with_root(p: Point2, inflow: Vec2, root_mark: u8) -> Result<Self> {
        if !(1..=2).contains(&root_mark) {
            return Err(Error::InvalidArgument(format!(
                "root mark must be 1 or 2, got {root_mark}"
            )));
        }
        Self::bare(p, inflow, root_mark)
    }

    /// A bare root for graphs built edge by edge (for example from a
    /// training image), where the root mark counts real edges only.
    pub fn builder(p: Point2, inflow: Vec2) -> Result<Self> {
        Self::bare(p, inflow, 0)
    }

    fn bare(p: Point2, inflow: Vec2, root_virtual: u8) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::InvalidArgument("root point is not finite".into()));
        }
        let dir = inflow
            .normalized()
            .ok_or_else(|| Error::InvalidArgument("root inflow must be non-zero".into()))?;
        Ok(Self {
            nodes: vec![Node {
                id: NodeId(0),
                p,
                alpha: vec![dir],
                mark: root_virtual.max(1),
                is_root: true,
                terminal: false,
                in_edges: vec![],
                out_edges: vec![],
            }],
            edges: vec![],
            root: NodeId(0),
            root_inflow: dir,
            root_virtual,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn root_inflow(&self) -> Vec2 {
        self.root_inflow
    }

    pub fn root_virtual(&self) -> u8 {
        self.root_virtual
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    /// Direct mutable access. Callers are responsible for keeping the
    /// invariants [`validate`] checks.
    pub fn node_mut(&mut self, id: NodeId) -> &mut Node {
        &mut self.nodes[id.0]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn segment(&self, id: EdgeId) -> (Point2, Point2) {
        let e = self.edges[id.0];
        (self.nodes[e.father.0].p, self.nodes[e.son.0].p)
    }

    pub fn edge_length(&self, id: EdgeId) -> f64 {
        let (a, b) = self.segment(id);
        a.dist(b)
    }

    pub fn edge_direction(&self, id: EdgeId) -> Vec2 {
        let (a, b) = self.segment(id);
        (b - a).normalized().unwrap_or_default()
    }

    pub fn total_length(&self) -> f64 {
        (0..self.edges.len())
            .map(|i| self.edge_length(EdgeId(i)))
            .sum()
    }

    /// Expected mark from the incident-edge count alone.
    pub fn counted_mark(&self, id: NodeId) -> u8 {
        let n = &self.nodes[id.0];
        let virt = if n.is_root {
            self.root_virtual as usize
        } else {
            0
        };
        (n.degree() + virt).min(3) as u8
    }

    /// Appends a node with no edges; its mark is fixed up by the caller or
    /// by [`Skeleton::recompute_marks`].
    pub fn add_node(&mut self, p: Point2) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            id,
            p,
            alpha: vec![],
            mark: 1,
            is_root: false,
            terminal: false,
            in_edges: vec![],
            out_edges: vec![],
        });
        id
    }

    /// Appends the edge `father -> son`, updating adjacency and arrival
    /// directions but not marks.
    pub fn add_edge(&mut self, father: NodeId, son: NodeId) -> Result<EdgeId> {
        if father == son || father.0 >= self.nodes.len() || son.0 >= self.nodes.len() {
            return Err(Error::InvalidArgument(format!(
                "bad edge {father} -> {son}"
            )));
        }
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge { id, father, son });
        self.nodes[father.0].out_edges.push(id);
        self.nodes[son.0].in_edges.push(id);
        let dir = self.edge_direction(id);
        let alpha = &mut self.nodes[son.0].alpha;
        if alpha.len() < 2 {
            alpha.push(dir);
        }
        Ok(id)
    }

    /// Splits edge `id` (`f -> s`) at `p`: the edge keeps its id and
    /// becomes `f -> j`, and a new edge `j -> s` is appended. Marks of the
    /// new node `j` are left to the caller.
    pub(crate) fn split_edge(&mut self, id: EdgeId, p: Point2) -> (NodeId, EdgeId) {
        let old_son = self.edges[id.0].son;
        let j = self.add_node(p);
        self.edges[id.0].son = j;
        let tail = EdgeId(self.edges.len());
        self.edges.push(Edge {
            id: tail,
            father: j,
            son: old_son,
        });
        for e in &mut self.nodes[old_son.0].in_edges {
            if *e == id {
                *e = tail;
            }
        }
        let dir = self.edge_direction(id);
        self.nodes[j.0].in_edges.push(id);
        self.nodes[j.0].out_edges.push(tail);
        self.nodes[j.0].alpha.push(dir);
        (j, tail)
    }

    /// Sets every mark to its incident count (clamped to 3), clearing the
    /// terminal flags.
    pub fn recompute_marks(&mut self) {
        for i in 0..self.nodes.len() {
            let m = self.counted_mark(NodeId(i)).max(1);
            let n = &mut self.nodes[i];
            n.mark = m;
            n.terminal = false;
        }
    }

    /// Whether a directed path leads from `from` to `to`.
    pub fn reaches(&self, from: NodeId, to: NodeId) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![from];
        seen[from.0] = true;
        while let Some(n) = stack.pop() {
            for &e in &self.nodes[n.0].out_edges {
                let s = self.edges[e.0].son;
                if s == to {
                    return true;
                }
                if !seen[s.0] {
                    seen[s.0] = true;
                    stack.push(s);
                }
            }
        }
        false
    }

    /// Edge generation: number of edges on the shortest directed path from
    /// the root to the edge's father. Unreachable edges get `u32::MAX`.
    pub fn edge_generations(&self) -> Vec<u32> {
        let mut depth = vec![u32::MAX; self.nodes.len()];
        depth[self.root.0] = 0;
        let mut queue = VecDeque::from([self.root]);
        while let Some(n) = queue.pop_front() {
            for &e in &self.nodes[n.0].out_edges {
                let s = self.edges[e.0].son;
                if depth[s.0] == u32::MAX {
                    depth[s.0] = depth[n.0] + 1;
                    queue.push_back(s);
                }
            }
        }
        self.edges.iter().map(|e| depth[e.father.0]).collect()
    }

    /// Applies a rigid motion (or any point map paired with the matching
    /// linear map for directions) to the whole skeleton.
    pub fn transformed(
        &self,
        point: impl Fn(Point2) -> Point2,
        dir: impl Fn(Vec2) -> Vec2,
    ) -> Self {
        let mut out = self.clone();
        for n in &mut out.nodes {
            n.p = point(n.p);
            for a in &mut n.alpha {
                *a = dir(*a).normalized().unwrap_or(*a);
            }
        }
        out.root_inflow = dir(out.root_inflow).normalized().unwrap_or(out.root_inflow);
        out
    }

    /// Rebuilds a skeleton from raw parts, deriving adjacency and arrival
    /// directions. Marks and terminal flags are taken as given.
    pub(crate) fn from_parts(
        points: Vec<Point2>,
        marks: Vec<u8>,
        edges: Vec<(NodeId, NodeId)>,
        root: NodeId,
        root_inflow: Vec2,
        root_virtual: u8,
    ) -> Result<Self> {
        if root.0 >= points.len() {
            return Err(Error::InvalidRoot(format!("root {root} does not exist")));
        }
        let inflow = root_inflow
            .normalized()
            .ok_or_else(|| Error::InvalidArgument("root inflow must be non-zero".into()))?;
        let mut sk = Skeleton {
            nodes: vec![],
            edges: vec![],
            root,
            root_inflow: inflow,
            root_virtual,
        };
        for p in points {
            sk.add_node(p);
        }
        sk.nodes[root.0].is_root = true;
        sk.nodes[root.0].alpha.push(inflow);
        for (f, s) in edges {
            sk.add_edge(f, s)?;
        }
        for (i, m) in marks.into_iter().enumerate() {
            let counted = sk.counted_mark(NodeId(i));
            let n = &mut sk.nodes[i];
            n.mark = m;
            n.terminal = m == 3 && counted < 3;
        }
        Ok(sk)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_root_marks() {
        let sk = Skeleton::with_root(Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), 2).unwrap();
        assert_eq!(sk.node(sk.root()).mark, 2);
        assert_eq!(sk.node(sk.root()).alpha, vec![Point2::new(1.0, 0.0)]);
        assert!(Skeleton::with_root(Point2::default(), Point2::new(1.0, 0.0), 3).is_err());
        assert!(Skeleton::with_root(Point2::default(), Point2::default(), 1).is_err());
    }

    #[test]
    fn reachability_and_generations() {
        let mut sk = Skeleton::builder(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)).unwrap();
        let a = sk.add_node(Point2::new(1.0, 0.0));
        let b = sk.add_node(Point2::new(2.0, 1.0));
        let c = sk.add_node(Point2::new(2.0, -1.0));
        sk.add_edge(sk.root(), a).unwrap();
        sk.add_edge(a, b).unwrap();
        sk.add_edge(a, c).unwrap();
        sk.recompute_marks();
        assert!(sk.reaches(sk.root(), c));
        assert!(!sk.reaches(b, a));
        assert_eq!(sk.edge_generations(), vec![0, 1, 1]);
        assert_eq!(sk.node(a).mark, 3);
        assert_eq!(sk.node(b).mark, 1);
        assert!(validate(&sk).is_empty());
    }
}

//! Skeleton CSV: one row per edge, root metadata in `#` comment lines.
//!
//! ```text
//! # root=0
//! # root_point=12.5,3
//! # root_inflow=1,0
//! # root_virtual=2
//! edge_id,father_id,son_id,fx,fy,sx,sy,father_mark,son_mark
//! 0,0,1,12.5,3,17.5,5.88675135,3,1
//! ```
//!
//! Only `# root=` is required when reading; the other comments default to
//! values derived from the edges.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{NodeId, Skeleton};
use crate::error::{Error, Result};
use crate::geom::Point2;

pub const CSV_HEADER: &str = "edge_id,father_id,son_id,fx,fy,sx,sy,father_mark,son_mark";

/// Formats `v` with 9 significant digits, like C's `%.9g`.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.8e}", v);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, v);
        trim_zeros(&s)
    } else {
        format!("{}e{}", trim_zeros(mant), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn write_csv(sk: &Skeleton) -> String {
    let root = sk.node(sk.root());
    let mut out = String::new();
    let _ = writeln!(out, "# root={}", sk.root().0);
    let _ = writeln!(
        out,
        "# root_point={},{}",
        format_sig9(root.p.x),
        format_sig9(root.p.y)
    );
    let dir = sk.root_inflow();
    let _ = writeln!(
        out,
        "# root_inflow={},{}",
        format_sig9(dir.x),
        format_sig9(dir.y)
    );
    let _ = writeln!(out, "# root_virtual={}", sk.root_virtual());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for e in sk.edges() {
        let f = sk.node(e.father);
        let s = sk.node(e.son);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            e.id.0,
            e.father.0,
            e.son.0,
            format_sig9(f.p.x),
            format_sig9(f.p.y),
            format_sig9(s.p.x),
            format_sig9(s.p.y),
            f.mark,
            s.mark
        );
    }
    out
}

fn parse_pair(s: &str, what: &str) -> Result<Point2> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::parse("skeleton csv", format!("{what}: expected x,y")))?;
    let x = a
        .trim()
        .parse()
        .map_err(|e| Error::parse("skeleton csv", format!("{what}: {e}")))?;
    let y = b
        .trim()
        .parse()
        .map_err(|e| Error::parse("skeleton csv", format!("{what}: {e}")))?;
    Ok(Point2::new(x, y))
}

struct NodeRec {
    p: Point2,
    mark: u8,
}

pub fn read_csv(text: &str) -> Result<Skeleton> {
    let err =
        |line: usize, msg: String| Error::parse("skeleton csv", format!("line {line}: {msg}"));
    let mut root: Option<usize> = None;
    let mut root_point: Option<Point2> = None;
    let mut root_inflow: Option<Point2> = None;
    let mut root_virtual: u8 = 0;
    let mut header_seen = false;
    let mut nodes: BTreeMap<usize, NodeRec> = BTreeMap::new();
    let mut rows: BTreeMap<usize, (usize, usize)> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if let Some((k, val)) = c.trim().split_once('=') {
                let val = val.trim();
                match k.trim() {
                    "root" => {
                        root = Some(val.parse().map_err(|e| err(lineno, format!("root: {e}")))?)
                    }
                    "root_point" => root_point = Some(parse_pair(val, "root_point")?),
                    "root_inflow" => root_inflow = Some(parse_pair(val, "root_inflow")?),
                    "root_virtual" => {
                        root_virtual =
                            val.parse().ok().filter(|v| *v <= 2).ok_or_else(|| {
                                err(lineno, "root_virtual must be 0, 1 or 2".into())
                            })?
                    }
                    _ => {}
                }
            }
            continue;
        }
        if !header_seen {
            if line != CSV_HEADER {
                return Err(err(lineno, format!("expected header `{CSV_HEADER}`")));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 9 {
            return Err(err(lineno, format!("expected 9 fields, got {}", f.len())));
        }
        let int = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| err(lineno, format!("{s:?}: {e}")))
        };
        let real = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(lineno, format!("{s:?} is not a finite number")))
        };
        let mark = |s: &str| {
            s.parse::<u8>()
                .ok()
                .filter(|m| (1..=3).contains(m))
                .ok_or_else(|| err(lineno, format!("mark {s:?} not in 1..=3")))
        };
        let (eid, fid, sid) = (int(f[0])?, int(f[1])?, int(f[2])?);
        let fp = Point2::new(real(f[3])?, real(f[4])?);
        let sp = Point2::new(real(f[5])?, real(f[6])?);
        let (fm, sm) = (mark(f[7])?, mark(f[8])?);
        for (id, p, m) in [(fid, fp, fm), (sid, sp, sm)] {
            match nodes.get(&id) {
                Some(prev) if prev.p != p || prev.mark != m => {
                    return Err(err(lineno, format!("node {id} redefined")));
                }
                Some(_) => {}
                None => {
                    nodes.insert(id, NodeRec { p, mark: m });
                }
            }
        }
        if rows.insert(eid, (fid, sid)).is_some() {
            return Err(err(lineno, format!("duplicate edge id {eid}")));
        }
    }
    if !header_seen {
        return Err(Error::parse("skeleton csv", "missing header"));
    }
    let root = root.ok_or_else(|| Error::parse("skeleton csv", "missing `# root=<id>` line"))?;
    if !nodes.contains_key(&root) {
        let p = root_point.ok_or_else(|| {
            Error::parse(
                "skeleton csv",
                format!("root {root} appears on no edge and has no root_point"),
            )
        })?;
        nodes.insert(
            root,
            NodeRec {
                p,
                mark: root_virtual.max(1),
            },
        );
    }

    let index: BTreeMap<usize, NodeId> = nodes
        .keys()
        .enumerate()
        .map(|(i, k)| (*k, NodeId(i)))
        .collect();
    let points = nodes.values().map(|n| n.p).collect();
    let marks = nodes.values().map(|n| n.mark).collect();
    let edges: Vec<(NodeId, NodeId)> = rows.values().map(|(f, s)| (index[f], index[s])).collect();
    let root_id = index[&root];
    let inflow = root_inflow
        .or_else(|| {
            let rp = nodes[&root].p;
            rows.values()
                .find(|(f, _)| *f == root)
                .and_then(|(_, s)| (nodes[s].p - rp).normalized())
        })
        .unwrap_or(Point2::new(1.0, 0.0));
    Skeleton::from_parts(points, marks, edges, root_id, inflow, root_virtual)
}

//! Explicit unit cells of 3-periodic graph embeddings.
//!
//! Text format, one record per line, `#` starts a comment:
//!
//! ```text
//! cell 1 1 1 90 90 90        # a b c alpha beta gamma (optional)
//! vertex A 0.125 0.125 0.125 # fractional coordinates
//! edge A B 0 1 0             # A to the copy of B translated by (0,1,0)
//! edge A A 0 0 1 0.3 0.2 0.5 # optional interior points, in A's cell frame
//! ```
//!
//! Every vertex and edge of the cell must be listed: symmetry expansion is
//! not done here. To convert a Systre-style `CRYSTAL` block, expand the
//! `NODE` orbits with the space group, keep one representative of each edge
//! orbit image in the cell and write the translation that takes its second
//! endpoint into the cell as the offset.
//!
//! The cell shape is kept for reference only. All geometry works in
//! fractional coordinates, which is the same as rectifying the cell to the
//! unit cube.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetVertex {
    pub label: String,
    pub pos: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetEdge {
    pub a: usize,
    pub b: usize,
    pub offset: [i64; 3],
    /// Interior points of the polyline, in the frame of `a`'s cell.
    pub via: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicEmbedding {
    /// `a b c alpha beta gamma`.
    pub cell: [f64; 6],
    pub vertices: Vec<NetVertex>,
    pub edges: Vec<NetEdge>,
}

impl Default for PeriodicEmbedding {
    fn default() -> Self {
        PeriodicEmbedding {
            cell: [1.0, 1.0, 1.0, 90.0, 90.0, 90.0],
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }
}

impl PeriodicEmbedding {
    /// The polyline of edge `i`, from `a` to the translate of `b`.
    pub fn polyline(&self, i: usize) -> Vec<[f64; 3]> {
        let e = &self.edges[i];
        let a = self.vertices[e.a].pos;
        let b = self.vertices[e.b].pos;
        let end = [0, 1, 2].map(|k| b[k] + e.offset[k] as f64);
        let mut out = Vec::with_capacity(e.via.len() + 2);
        out.push(a);
        out.extend(e.via.iter().copied());
        out.push(end);
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.a == v) as usize + (e.b == v) as usize)
            .sum()
    }

    /// Connected components of the periodic graph (vertices of the cell
    /// joined by edges, ignoring translations).
    pub fn component_count(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            parent[ra] = rb;
        }
        (0..n).filter(|&v| find(&mut parent, v) == v).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = self.cell;
        let _ = writeln!(
            out,
            "cell {} {} {} {} {} {}",
            c[0], c[1], c[2], c[3], c[4], c[5]
        );
        for v in &self.vertices {
            let _ = writeln!(
                out,
                "vertex {} {} {} {}",
                v.label, v.pos[0], v.pos[1], v.pos[2]
            );
        }
        for e in &self.edges {
            let (a, b) = (&self.vertices[e.a].label, &self.vertices[e.b].label);
            let _ = write!(
                out,
                "edge {a} {b} {} {} {}",
                e.offset[0], e.offset[1], e.offset[2]
            );
            for p in &e.via {
                let _ = write!(out, " {} {} {}", p[0], p[1], p[2]);
            }
            out.push('\n');
        }
        out
    }
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Net {
        line,
        msg: msg.into(),
    }
}

fn floats(line: usize, toks: &[&str]) -> Result<Vec<f64>> {
    toks.iter()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad(line, format!("expected a number, got `{t}`")))
        })
        .collect()
}

/// An edge line awaiting vertex resolution: line, endpoints, offset, bends.
type Pending = (usize, String, String, [i64; 3], Vec<[f64; 3]>);

/// Parses the net format. Vertex coordinates are wrapped into `[0,1)` and
/// edge offsets adjusted to match.
pub fn load_net(text: &str) -> Result<PeriodicEmbedding> {
    let mut net = PeriodicEmbedding::default();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut shift: Vec<[i64; 3]> = Vec::new();
    let mut pending: Vec<Pending> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some((&key, rest)) = toks.split_first() else {
            continue;
        };
        match key {
            "cell" => {
                let v = floats(line, rest)?;
                if v.len() != 6 {
                    return Err(bad(line, "cell needs a b c alpha beta gamma"));
                }
                net.cell.copy_from_slice(&v);
            }
            "vertex" => {
                let [label, coords @ ..] = rest else {
                    return Err(bad(line, "vertex needs a label"));
                };
                let v = floats(line, coords)?;
                if v.len() != 3 {
                    return Err(bad(line, "vertex needs three coordinates"));
                }
                if index
                    .insert(label.to_string(), net.vertices.len())
                    .is_some()
                {
                    return Err(bad(line, format!("duplicate vertex `{label}`")));
                }
                let k = [0, 1, 2].map(|i| v[i].floor() as i64);
                shift.push(k);
                net.vertices.push(NetVertex {
                    label: label.to_string(),
                    pos: [0, 1, 2].map(|i| v[i] - k[i] as f64),
                });
            }
            "edge" => {
                if rest.len() < 5 {
                    return Err(bad(line, "edge needs two labels and an offset"));
                }
                let mut offset = [0i64; 3];
                for i in 0..3 {
                    offset[i] = rest[2 + i].parse().map_err(|_| {
                        bad(line, format!("offset `{}` is not an integer", rest[2 + i]))
                    })?;
                }
                let via = floats(line, &rest[5..])?;
                if via.len() % 3 != 0 {
                    return Err(bad(line, "interior points need three coordinates each"));
                }
                let via = via.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
                pending.push((line, rest[0].to_string(), rest[1].to_string(), offset, via));
            }
            other => return Err(bad(line, format!("unknown key `{other}`"))),
        }
    }
    for (line, a, b, offset, via) in pending {
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| bad(line, format!("unknown vertex `{l}`")))
        };
        let (a, b) = (lookup(&a)?, lookup(&b)?);
        let (ka, kb) = (shift[a], shift[b]);
        let offset = [0, 1, 2].map(|i| offset[i] + kb[i] - ka[i]);
        let via = via
            .into_iter()
            .map(|p: [f64; 3]| [0, 1, 2].map(|i| p[i] - ka[i] as f64))
            .collect();
        if a == b && offset == [0; 3] {
            return Err(bad(
                line,
                "edge joins a vertex to itself without translation",
            ));
        }
        net.edges.push(NetEdge { a, b, offset, via });
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREADS: &str = "# two threads along z\nvertex a 0.25 0.25 0.5\nvertex b 0.75 0.75 0.5\n\
                           edge a a 0 0 1\nedge b b 0 0 1\n";

    #[test]
    fn parallel_threads() {
        let n = load_net(THREADS).unwrap();
        assert_eq!(n.vertices.len(), 2);
        assert_eq!(n.edges.len(), 2);
        assert_eq!((n.degree(0), n.degree(1)), (2, 2));
        assert_eq!(n.edges[0].offset, [0, 0, 1]);
        assert_eq!(n.component_count(), 2);
    }

    #[test]
    fn wraps_coordinates_and_offsets() {
        let n = load_net("vertex a 1.25 0 0\nvertex b 0.5 0 0\nedge a b 0 0 0\n").unwrap();
        assert_eq!(n.vertices[0].pos, [0.25, 0.0, 0.0]);
        assert_eq!(n.edges[0].offset, [-1, 0, 0]);
        let p = n.polyline(0);
        assert_eq!(p[1][0] - p[0][0], 0.5 - 1.25);
    }

    #[test]
    fn round_trip() {
        let n =
            load_net("cell 2 2 2 90 90 90\nvertex a 0.1 0.2 0.3\nedge a a 1 0 0 0.5 0.25 0.3\n")
                .unwrap();
        assert_eq!(load_net(&n.to_text()).unwrap(), n);
    }

    #[test]
    fn errors_carry_lines() {
        for (text, line) in [
            ("vertex a 0 0 0\nbogus 1\n", 2),
            ("vertex a 0 0 0\nedge a a 0 0 0.5\n", 2),
            ("vertex a 0 0 0\n\nedge a z 0 0 1\n", 3),
            ("vertex a 0 0\n", 1),
        ] {
            match load_net(text) {
                Err(Error::Net { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}

//! Strand following and homology classes.
//!
//! A strand goes straight through crossings, from dot to circle through
//! markers and across identified punctures; it ends at graph vertices.
//! Passing right-to-left through the vertical edge pair counts `+1` in the
//! first coordinate (the strand travels rightwards), top-to-bottom `+1` in
//! the second, and dot-to-circle `+1` in the third.

use serde::Serialize;

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::diagram::{End, NodeId, NodeKind, Side, SquareDiagram};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Strand {
    pub closed: bool,
    /// Net passages, normalised so the first non-zero entry is positive.
    pub homology_class: [i64; 3],
    pub arcs: usize,
}

fn normalise(mut c: [i64; 3]) -> [i64; 3] {
    if let Some(&first) = c.iter().find(|&&x| x != 0) {
        if first < 0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
    }
    c
}

/// End index in a flat visited table.
fn slot(d: &SquareDiagram, offsets: &[usize], e: End) -> usize {
    match e {
        End::Port(n, p) => offsets[n as usize] + p as usize,
        End::Punct(i) => offsets[d.nodes().len()] + i as usize,
        End::Open => usize::MAX,
    }
}

/// One traced strand with its raw (oriented) class.
struct Trace {
    class: [i64; 3],
    arcs: usize,
    closed: bool,
    /// Vertex the strand stops at, for open strands.
    end: Option<NodeId>,
}

/// Follows the strand leaving through `start`. Marks every end it touches.
fn follow(d: &SquareDiagram, offsets: &[usize], seen: &mut [bool], start: End) -> Trace {
    let mut class = [0i64; 3];
    let mut arcs = 0;
    let mut e = start;
    loop {
        seen[slot(d, offsets, e)] = true;
        let f = d.link(e);
        if f == End::Open {
            return Trace {
                class,
                arcs,
                closed: false,
                end: None,
            };
        }
        seen[slot(d, offsets, f)] = true;
        arcs += 1;
        let next = match f {
            End::Port(n, p) => match d.node(n).kind {
                NodeKind::Crossing(_) => End::Port(n, (p + 2) % 4),
                NodeKind::Marker => {
                    class[2] += if p == 0 { 1 } else { -1 };
                    End::Port(n, 1 - p)
                }
                NodeKind::Vertex(_) => {
                    return Trace {
                        class,
                        arcs,
                        closed: false,
                        end: Some(n),
                    }
                }
            },
            End::Punct(i) => {
                let pu = &d.punctures()[i as usize];
                match pu.side {
                    Side::R => class[0] += 1,
                    Side::L => class[0] -= 1,
                    Side::T => class[1] += 1,
                    Side::B => class[1] -= 1,
                }
                match d.partner(i) {
                    Some(j) => End::Punct(j),
                    None => {
                        return Trace {
                            class,
                            arcs,
                            closed: false,
                            end: None,
                        }
                    }
                }
            }
            End::Open => unreachable!(),
        };
        if next == start {
            return Trace {
                class,
                arcs,
                closed: true,
                end: None,
            };
        }
        e = next;
    }
}

/// Raw traces: open strands as `(start vertex, trace)`, then closed ones.
fn traces(d: &SquareDiagram) -> Vec<(Option<NodeId>, Trace)> {
    let mut offsets = Vec::with_capacity(d.nodes().len() + 1);
    let mut total = 0;
    for n in d.nodes() {
        offsets.push(total);
        total += n.arity();
    }
    offsets.push(total);
    total += d.punctures().len();
    let mut seen = vec![false; total];
    let mut out = Vec::new();
    for (i, n) in d.nodes().iter().enumerate() {
        if !n.is_vertex() {
            continue;
        }
        for p in 0..n.arity() {
            let e = End::Port(i as u32, p as u8);
            if seen[slot(d, &offsets, e)] {
                continue;
            }
            out.push((Some(i as NodeId), follow(d, &offsets, &mut seen, e)));
        }
    }
    let all_ends = d
        .nodes()
        .iter()
        .enumerate()
        .flat_map(|(i, n)| (0..n.arity()).map(move |p| End::Port(i as u32, p as u8)))
        .chain((0..d.punctures().len()).map(|i| End::Punct(i as u32)));
    for e in all_ends {
        if seen[slot(d, &offsets, e)] {
            continue;
        }
        out.push((None, follow(d, &offsets, &mut seen, e)));
    }
    out
}

/// All strands of a valid diagram, sorted.
pub fn strands(d: &SquareDiagram) -> Vec<Strand> {
    let mut out: Vec<Strand> = traces(d)
        .into_iter()
        .map(|(_, t)| Strand {
            closed: t.closed,
            homology_class: normalise(t.class),
            arcs: t.arcs,
        })
        .collect();
    for _ in 0..d.free_loops() {
        out.push(Strand {
            closed: true,
            homology_class: [0; 3],
            arcs: 0,
        });
    }
    out.sort();
    out
}

/// Sorted homology classes of the closed strands.
pub fn closed_classes(d: &SquareDiagram) -> Vec<[i64; 3]> {
    strands(d)
        .into_iter()
        .filter(|s| s.closed)
        .map(|s| s.homology_class)
        .collect()
}

/// Sorted homology classes of the vertex-to-vertex strands.
pub fn open_classes(d: &SquareDiagram) -> Vec<[i64; 3]> {
    strands(d)
        .into_iter()
        .filter(|s| !s.closed)
        .map(|s| s.homology_class)
        .collect()
}

/// Lattice spanned by the classes of the cycles of the graph formed by the
/// vertex-to-vertex strands, in Hermite normal form (rows, zero-padded).
///
/// Translating a vertex by a lattice vector shifts the classes of its
/// strands but not the classes of cycles, so this is invariant under every
/// move, including the vertex transfers.
pub fn cycle_lattice(d: &SquareDiagram) -> [[i64; 3]; 3] {
    let edges: Vec<(NodeId, NodeId, [i64; 3])> = traces(d)
        .into_iter()
        .filter_map(|(from, t)| Some((from?, t.end?, t.class)))
        .collect();
    let mut adj: HashMap<NodeId, Vec<(NodeId, [i64; 3])>> = HashMap::new();
    for &(a, b, c) in &edges {
        adj.entry(a).or_default().push((b, c));
        adj.entry(b).or_default().push((a, c.map(|x| -x)));
    }
    let mut pot: HashMap<NodeId, [i64; 3]> = HashMap::new();
    let mut roots: Vec<NodeId> = adj.keys().copied().collect();
    roots.sort();
    for r in roots {
        if pot.contains_key(&r) {
            continue;
        }
        pot.insert(r, [0; 3]);
        let mut stack = vec![r];
        while let Some(u) = stack.pop() {
            let pu = pot[&u];
            for &(w, c) in &adj[&u] {
                if let Entry::Vacant(e) = pot.entry(w) {
                    e.insert([pu[0] + c[0], pu[1] + c[1], pu[2] + c[2]]);
                    stack.push(w);
                }
            }
        }
    }
    let rows: Vec<[i64; 3]> = edges
        .iter()
        .map(|&(a, b, c)| {
            let (pa, pb) = (pot[&a], pot[&b]);
            [0, 1, 2].map(|k| pa[k] + c[k] - pb[k])
        })
        .collect();
    hermite(rows)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
fn hermite(mut rows: Vec<[i64; 3]>) -> [[i64; 3]; 3] {
    let mut out = [[0i64; 3]; 3];
    let mut r = 0;
    for col in 0..3 {
        // Euclid on column `col` among the remaining rows.
        loop {
            rows.retain(|v| v.iter().any(|&x| x != 0));
            let Some(piv) = rows
                .iter()
                .enumerate()
                .filter(|(_, v)| v[col] != 0)
                .min_by_key(|(_, v)| v[col].abs())
                .map(|(i, _)| i)
            else {
                break;
            };
            let p = rows[piv];
            let mut done = true;
            for (i, v) in rows.iter_mut().enumerate() {
                if i != piv && v[col] != 0 {
                    let q = v[col] / p[col];
                    for k in 0..3 {
                        v[k] -= q * p[k];
                    }
                    done &= v[col] == 0;
                }
            }
            if done {
                let mut p = rows.swap_remove(piv);
                if p[col] < 0 {
                    p = p.map(|x| -x);
                }
                out[r] = p;
                r += 1;
                break;
            }
        }
    }
    for i in 0..r {
        let col = (0..3).find(|&k| out[i][k] != 0).expect("pivot");
        for j in 0..i {
            let q = out[j][col].div_euclid(out[i][col]);
            let pivot = out[i];
            for (x, y) in out[j].iter_mut().zip(pivot) {
                *x -= q * y;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_diagram;

    #[test]
    fn marker_loop_has_vertical_class() {
        let d = parse_diagram("pdg 1\nM 0 a b\nA a b\n").unwrap();
        let s = strands(&d);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].homology_class, [0, 0, 1]);
        assert!(s[0].closed);
    }

    #[test]
    fn two_horizontal_threads() {
        let d = parse_diagram("pdg 1\nP L 0 a\nP L 1 b\nP R 0 c\nP R 1 e\nA a c\nA b e\n").unwrap();
        let s = strands(&d);
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|x| x.homology_class == [1, 0, 0] && x.closed));
    }

    #[test]
    fn hermite_form_is_canonical() {
        assert_eq!(
            hermite(vec![[2, 0, 0], [3, 0, 0]]),
            [[1, 0, 0], [0; 3], [0; 3]]
        );
        assert_eq!(
            hermite(vec![[0, 1, 1], [1, 1, 0], [0, 0, 2]]),
            hermite(vec![[1, 2, 1], [0, -1, -1], [0, 0, 2]])
        );
        assert_eq!(hermite(vec![]), [[0; 3]; 3]);
    }

    #[test]
    fn theta_vertices_give_open_strands() {
        let d = parse_diagram("pdg 1\nV 0 a b c\nV 1 d e f\nA a f\nA b e\nA c d\n").unwrap();
        let s = strands(&d);
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|x| !x.closed && x.arcs == 1));
    }
}

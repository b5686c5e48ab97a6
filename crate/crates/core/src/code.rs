//! Canonical codes and canonical relabelling.
//!
//! The component containing the frame is traversed from the bottom-left
//! corner, which fixes its labelling outright. Components floating inside
//! the square are traversed from every dart and the least token sequence is
//! kept. Ports are recorded relative to the port through which a node was
//! first reached, so the code does not depend on node ids or on where each
//! node's rotation starts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{End, Node, NodeKind, Puncture, SquareDiagram};
use crate::map::{FrameVertex, PlanarMap};
use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalCode(#[serde(with = "hex_bytes")] pub Vec<u8>);

impl CanonicalCode {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Option<CanonicalCode> {
        hex::decode(s).ok().map(CanonicalCode)
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

mod hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        hex::decode(s).map_err(serde::de::Error::custom)
    }
}

const SEP: u32 = u32::MAX;

struct Traversal {
    tokens: Vec<u32>,
    /// Map vertices in visiting order with their entry port.
    order: Vec<(usize, usize)>,
}

fn label_hash(s: &str) -> u32 {
    // FNV-1a; labels only need to be distinguished, not ordered.
    let mut h: u32 = 0x811c_9dc5;
    for b in s.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    h & 0x7fff_ffff
}

fn descriptor(
    d: &SquareDiagram,
    map: &PlanarMap,
    v: usize,
    entry: usize,
    shadow: bool,
    out: &mut Vec<u32>,
) {
    if v < map.node_count {
        let node = &d.nodes()[v];
        match &node.kind {
            NodeKind::Crossing(o) => {
                out.push(1);
                out.push(if shadow {
                    2
                } else {
                    o.is_over(entry as u8) as u32
                });
            }
            NodeKind::Vertex(label) => {
                out.push(2);
                out.push(node.arity() as u32);
                out.push(label.as_deref().map_or(0, |l| 1 + label_hash(l)));
            }
            NodeKind::Marker => {
                out.push(3);
                out.push(entry as u32);
            }
        }
    } else {
        match map.frame[v - map.node_count] {
            FrameVertex::Corner(c) => {
                out.push(4);
                out.push(c as u32);
            }
            FrameVertex::Punct(i) => {
                out.push(5);
                out.push(d.punctures()[i as usize].side as u32);
            }
        }
    }
}

fn traverse(
    d: &SquareDiagram,
    map: &PlanarMap,
    root: usize,
    shadow: bool,
    best: Option<&[u32]>,
) -> Option<Traversal> {
    let nv = map.vertex_count();
    let mut id = vec![u32::MAX; nv];
    let mut entry = vec![0usize; nv];
    let mut order = Vec::new();
    let mut tokens = Vec::new();
    let rv = map.vertex_of[root];
    id[rv] = 0;
    entry[rv] = map.port_of(root);
    order.push((rv, entry[rv]));
    let mut head = 0;
    while head < order.len() {
        let (v, e) = order[head];
        head += 1;
        descriptor(d, map, v, e, shadow, &mut tokens);
        let deg = map.deg[v];
        for j in 0..deg {
            let dart = map.offset[v] + (e + j) % deg;
            let t = map.link[dart];
            let w = map.vertex_of[t];
            let q = map.port_of(t);
            if id[w] == u32::MAX {
                id[w] = order.len() as u32;
                entry[w] = q;
                order.push((w, q));
            }
            let rel = (q + map.deg[w] - entry[w]) % map.deg[w];
            tokens.push(id[w]);
            tokens.push(rel as u32);
        }
        if let Some(b) = best {
            // Early exit once the prefix is already larger than the best.
            let n = tokens.len().min(b.len());
            if tokens[..n] > b[..n] {
                return None;
            }
        }
    }
    Some(Traversal { tokens, order })
}

pub(crate) fn canonical_parts(
    d: &SquareDiagram,
    shadow: bool,
) -> Result<(CanonicalCode, Vec<(usize, usize)>), Error> {
    let map = PlanarMap::build(d).map_err(|e| Error::Structure(format!("{e:?}")))?;
    let comp = map.components();
    let frame_root_vertex = map.node_count;
    let frame_comp = comp[frame_root_vertex];
    let main = traverse(d, &map, map.offset[frame_root_vertex] + 1, shadow, None)
        .expect("unbounded traversal");
    let ncomp = comp.iter().copied().max().unwrap_or(0) + 1;
    let mut floating: Vec<Traversal> = Vec::new();
    for c in 0..ncomp {
        if c == frame_comp {
            continue;
        }
        let mut best: Option<Traversal> = None;
        for dart in 0..map.dart_count() {
            if comp[map.vertex_of[dart]] != c {
                continue;
            }
            if let Some(t) = traverse(
                d,
                &map,
                dart,
                shadow,
                best.as_ref().map(|b| b.tokens.as_slice()),
            ) {
                if best.as_ref().is_none_or(|b| t.tokens < b.tokens) {
                    best = Some(t);
                }
            }
        }
        floating.push(best.expect("component has darts"));
    }
    floating.sort_by(|a, b| a.tokens.cmp(&b.tokens));
    let mut tokens = main.tokens.clone();
    let mut order = main.order.clone();
    for t in &floating {
        tokens.push(SEP);
        tokens.extend_from_slice(&t.tokens);
        order.extend_from_slice(&t.order);
    }
    tokens.push(SEP);
    tokens.push(d.free_loops());
    let mut bytes = Vec::with_capacity(tokens.len() * 2);
    for t in tokens {
        let mut x = t;
        loop {
            let b = (x & 0x7f) as u8;
            x >>= 7;
            if x == 0 {
                bytes.push(b);
                break;
            }
            bytes.push(b | 0x80);
        }
    }
    Ok((CanonicalCode(bytes), order))
}

pub fn canonical_code(d: &SquareDiagram) -> Result<CanonicalCode, Error> {
    canonical_parts(d, false).map(|(c, _)| c)
}

/// Relabels `d` into its canonical form: nodes in traversal order, each
/// crossing and vertex rotated so that its entry port becomes port 0.
/// Isomorphic diagrams have identical canonical forms.
pub fn canonical_form(d: &SquareDiagram) -> Result<(CanonicalCode, SquareDiagram), Error> {
    let (code, order) = canonical_parts(d, false)?;
    let n = d.nodes().len();
    let mut new_id = vec![u32::MAX; n];
    let mut shift = vec![0u8; n];
    let mut next = 0u32;
    for &(v, e) in &order {
        if v < n {
            new_id[v] = next;
            next += 1;
            if !d.nodes()[v].is_marker() {
                shift[v] = e as u8;
            }
        }
    }
    let map_end = |e: End| match e {
        End::Port(id, p) => {
            let k = d.nodes()[id as usize].arity() as u8;
            End::Port(new_id[id as usize], (p + k - shift[id as usize]) % k)
        }
        other => other,
    };
    let mut nodes: Vec<Option<Node>> = vec![None; n];
    for (v, node) in d.nodes().iter().enumerate() {
        let k = node.arity() as u8;
        let s = shift[v];
        let mut links = vec![End::Open; node.arity()];
        for (p, &l) in node.links.iter().enumerate() {
            links[((p as u8 + k - s) % k) as usize] = map_end(l);
        }
        let kind = match &node.kind {
            NodeKind::Crossing(o) if s % 2 == 1 => NodeKind::Crossing(o.flipped()),
            other => other.clone(),
        };
        nodes[new_id[v] as usize] = Some(Node { kind, links });
    }
    let punctures: Vec<Puncture> = d
        .punctures()
        .iter()
        .map(|p| Puncture {
            side: p.side,
            slot: p.slot,
            link: map_end(p.link),
        })
        .collect();
    let mut out = SquareDiagram {
        axis: d.axis,
        nodes: nodes
            .into_iter()
            .map(|n| n.expect("every node visited"))
            .collect(),
        punctures,
        free_loops: d.free_loops(),
    };
    // Punctures are already sorted by (side, slot); keep the invariant explicit.
    debug_assert!(out
        .punctures
        .windows(2)
        .all(|w| (w[0].side, w[0].slot) <= (w[1].side, w[1].slot)));
    out.axis = d.axis;
    Ok((code, out))
}

/// Code of the diagram with crossing information erased.
pub fn shadow_code(d: &SquareDiagram) -> Result<CanonicalCode, Error> {
    canonical_parts(d, true).map(|(c, _)| c)
}

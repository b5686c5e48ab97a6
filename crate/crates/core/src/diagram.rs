//! Combinatorial torus diagrams.
//!
//! A [`SquareDiagram`] is a decorated rotation system drawn inside the unit
//! square whose opposite edges are identified. Nodes are crossings, graph
//! vertices and front/back markers; every node lists its ports in
//! counter-clockwise order. Strands leaving the square do so through
//! [`Puncture`]s; puncture `k` on the left edge is identified with puncture
//! `k` on the right edge, likewise bottom/top. Slots count upwards along the
//! vertical edges and rightwards along the horizontal ones.

use std::fmt;

use serde::{Deserialize, Serialize};

pub type NodeId = u32;

/// Edge of the square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
    B,
    T,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::L, Side::R, Side::B, Side::T];

    pub fn opposite(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
            Side::B => Side::T,
            Side::T => Side::B,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::L => 'L',
            Side::R => 'R',
            Side::B => 'B',
            Side::T => 'T',
        }
    }

    pub fn from_letter(c: &str) -> Option<Side> {
        match c {
            "L" => Some(Side::L),
            "R" => Some(Side::R),
            "B" => Some(Side::B),
            "T" => Some(Side::T),
            _ => None,
        }
    }

    /// Left and right edges (slots run along the y axis).
    pub fn is_vertical(self) -> bool {
        matches!(self, Side::L | Side::R)
    }

    /// Whether the counter-clockwise walk around the frame visits this
    /// side's slots in increasing order.
    pub fn ccw_increasing(self) -> bool {
        matches!(self, Side::B | Side::R)
    }
}

/// Projection axis of a diagram inside a tridiagram (1, 2 or 3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Axis(u8);

impl Axis {
    pub const ALL: [Axis; 3] = [Axis(1), Axis(2), Axis(3)];

    pub fn new(n: u8) -> Option<Axis> {
        (1..=3).contains(&n).then_some(Axis(n))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based index of the projection coordinate.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    /// Coordinates `(horizontal, vertical)` seen when projecting along this axis.
    pub fn plane(self) -> (usize, usize) {
        match self.0 {
            1 => (1, 2),
            2 => (2, 0),
            _ => (0, 1),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One end of an arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    Port(NodeId, u8),
    /// Index into [`SquareDiagram::punctures`].
    Punct(u32),
    /// Unattached port; only produced when parsing malformed input.
    Open,
}

impl End {
    pub fn node(self) -> Option<NodeId> {
        match self {
            End::Port(n, _) => Some(n),
            _ => None,
        }
    }
}

/// Which opposite port pair of a crossing carries the over-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OverPair {
    /// Ports 0 and 2.
    Even,
    /// Ports 1 and 3.
    Odd,
}

impl OverPair {
    pub fn flipped(self) -> OverPair {
        match self {
            OverPair::Even => OverPair::Odd,
            OverPair::Odd => OverPair::Even,
        }
    }

    pub fn of_port(port: u8) -> OverPair {
        if port.is_multiple_of(2) {
            OverPair::Even
        } else {
            OverPair::Odd
        }
    }

    pub fn is_over(self, port: u8) -> bool {
        OverPair::of_port(port) == self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Crossing(OverPair),
    Vertex(Option<String>),
    /// Port 0 is the dot (front) side, port 1 the circle (back) side.
    Marker,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub kind: NodeKind,
    /// `links[p]` is the far end of the arc leaving port `p`.
    pub links: Vec<End>,
}

impl Node {
    pub fn arity(&self) -> usize {
        self.links.len()
    }

    pub fn is_crossing(&self) -> bool {
        matches!(self.kind, NodeKind::Crossing(_))
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self.kind, NodeKind::Vertex(_))
    }

    pub fn is_marker(&self) -> bool {
        matches!(self.kind, NodeKind::Marker)
    }

    pub fn over(&self) -> Option<OverPair> {
        match self.kind {
            NodeKind::Crossing(o) => Some(o),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Puncture {
    pub side: Side,
    pub slot: u32,
    pub link: End,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SquareDiagram {
    pub axis: Option<Axis>,
    pub(crate) nodes: Vec<Node>,
    pub(crate) punctures: Vec<Puncture>,
    /// Closed, crossing-free, contractible components carrying no nodes.
    pub(crate) free_loops: u32,
}

impl SquareDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id as usize]
    }

    pub fn punctures(&self) -> &[Puncture] {
        &self.punctures
    }

    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }

    pub fn set_free_loops(&mut self, n: u32) {
        self.free_loops = n;
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.punctures.is_empty() && self.free_loops == 0
    }

    pub fn crossing_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_crossing()).count()
    }

    pub fn marker_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_marker()).count()
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_vertex()).count()
    }

    pub fn crossings(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_crossing())
            .map(|(i, _)| i as NodeId)
    }

    /// Number of punctures on one side.
    pub fn side_count(&self, side: Side) -> usize {
        self.punctures.iter().filter(|p| p.side == side).count()
    }

    /// Puncture pairs on the left/right edges and on the bottom/top edges.
    pub fn puncture_pairs(&self) -> (usize, usize) {
        (self.side_count(Side::L), self.side_count(Side::B))
    }

    pub fn link(&self, end: End) -> End {
        match end {
            End::Port(n, p) => self.nodes[n as usize].links[p as usize],
            End::Punct(i) => self.punctures[i as usize].link,
            End::Open => End::Open,
        }
    }

    pub fn puncture_at(&self, side: Side, slot: u32) -> Option<u32> {
        self.punctures
            .iter()
            .position(|p| p.side == side && p.slot == slot)
            .map(|i| i as u32)
    }

    /// The identified partner of a puncture on the opposite edge.
    pub fn partner(&self, punct: u32) -> Option<u32> {
        let p = &self.punctures[punct as usize];
        self.puncture_at(p.side.opposite(), p.slot)
    }

    /// Every arc once, as an ordered pair with the smaller end first.
    pub fn arcs(&self) -> Vec<(End, End)> {
        let mut out = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            for (p, &l) in n.links.iter().enumerate() {
                let here = End::Port(i as NodeId, p as u8);
                if here <= l || l == End::Open {
                    out.push((here, l));
                }
            }
        }
        for (i, pu) in self.punctures.iter().enumerate() {
            let here = End::Punct(i as u32);
            if here <= pu.link || pu.link == End::Open {
                out.push((here, pu.link));
            }
        }
        out
    }

    /// Toggles the over-pair of a crossing.
    pub fn crossing_change(&self, id: NodeId) -> Result<SquareDiagram, crate::Error> {
        let mut d = self.clone();
        match d.nodes.get_mut(id as usize).map(|n| &mut n.kind) {
            Some(NodeKind::Crossing(o)) => {
                *o = o.flipped();
                Ok(d)
            }
            _ => Err(crate::Error::NotACrossing(id)),
        }
    }

    /// Same map with all crossing information erased (every crossing set to
    /// the even over-pair).
    pub fn shadow(&self) -> SquareDiagram {
        let mut d = self.clone();
        for n in &mut d.nodes {
            if let NodeKind::Crossing(o) = &mut n.kind {
                *o = OverPair::Even;
            }
        }
        d
    }

    /// Over/under assignment of the crossings, in node order.
    pub fn assignment(&self) -> Vec<OverPair> {
        self.nodes.iter().filter_map(Node::over).collect()
    }

    /// Replaces the crossing assignment; `bits` is indexed like [`Self::crossings`].
    pub fn with_assignment(&self, bits: &[OverPair]) -> SquareDiagram {
        let mut d = self.clone();
        let mut it = bits.iter();
        for n in &mut d.nodes {
            if let NodeKind::Crossing(o) = &mut n.kind {
                *o = *it.next().expect("assignment shorter than crossing count");
            }
        }
        d
    }

    /// Applies a node permutation (`perm[old] = new`) and a cyclic port shift
    /// per node; used by tests to check relabelling invariance.
    pub fn relabelled(&self, perm: &[NodeId], rot: &[u8]) -> SquareDiagram {
        let n = self.nodes.len();
        assert_eq!(perm.len(), n);
        let map_end = |e: End| match e {
            End::Port(id, p) => {
                let node = &self.nodes[id as usize];
                let k = node.arity() as u8;
                let shift = if node.is_marker() {
                    0
                } else {
                    rot[id as usize] % k
                };
                End::Port(perm[id as usize], (p + k - shift) % k)
            }
            other => other,
        };
        let mut nodes = vec![
            Node {
                kind: NodeKind::Marker,
                links: Vec::new()
            };
            n
        ];
        for (id, node) in self.nodes.iter().enumerate() {
            let k = node.arity() as u8;
            let shift = if node.is_marker() { 0 } else { rot[id] % k };
            let mut links = vec![End::Open; node.arity()];
            for (p, &l) in node.links.iter().enumerate() {
                links[((p as u8 + k - shift) % k) as usize] = map_end(l);
            }
            let kind = match &node.kind {
                NodeKind::Crossing(o) if shift % 2 == 1 => NodeKind::Crossing(o.flipped()),
                other => other.clone(),
            };
            nodes[perm[id] as usize] = Node { kind, links };
        }
        let punctures = self
            .punctures
            .iter()
            .map(|p| Puncture {
                side: p.side,
                slot: p.slot,
                link: map_end(p.link),
            })
            .collect();
        SquareDiagram {
            axis: self.axis,
            nodes,
            punctures,
            free_loops: self.free_loops,
        }
    }
}

/// In-place editor used by the move engine and the projection builder.
/// Removed items are tombstoned and dropped by [`Editor::finish`].
#[derive(Debug)]
pub(crate) struct Editor {
    pub d: SquareDiagram,
    dead_nodes: Vec<bool>,
    dead_punct: Vec<bool>,
}

impl Editor {
    pub fn new(d: SquareDiagram) -> Self {
        let nn = d.nodes.len();
        let np = d.punctures.len();
        Editor {
            d,
            dead_nodes: vec![false; nn],
            dead_punct: vec![false; np],
        }
    }

    pub fn link(&self, e: End) -> End {
        self.d.link(e)
    }

    fn set(&mut self, e: End, to: End) {
        match e {
            End::Port(n, p) => self.d.nodes[n as usize].links[p as usize] = to,
            End::Punct(i) => self.d.punctures[i as usize].link = to,
            End::Open => {}
        }
    }

    pub fn connect(&mut self, a: End, b: End) {
        self.set(a, b);
        self.set(b, a);
    }

    pub fn add_node(&mut self, kind: NodeKind, arity: usize) -> NodeId {
        self.d.nodes.push(Node {
            kind,
            links: vec![End::Open; arity],
        });
        self.dead_nodes.push(false);
        (self.d.nodes.len() - 1) as NodeId
    }

    pub fn remove_node(&mut self, id: NodeId) {
        self.dead_nodes[id as usize] = true;
    }

    pub fn add_puncture(&mut self, side: Side, slot: u32) -> End {
        self.d.punctures.push(Puncture {
            side,
            slot,
            link: End::Open,
        });
        self.dead_punct.push(false);
        End::Punct((self.d.punctures.len() - 1) as u32)
    }

    pub fn remove_puncture(&mut self, e: End) {
        if let End::Punct(i) = e {
            self.dead_punct[i as usize] = true;
        }
    }

    /// Adds `delta` to every live slot `>= from` on `side` and its opposite.
    pub fn shift_slots(&mut self, side: Side, from: u32, delta: i64) {
        let other = side.opposite();
        for (i, p) in self.d.punctures.iter_mut().enumerate() {
            if self.dead_punct[i] {
                continue;
            }
            if (p.side == side || p.side == other) && p.slot >= from {
                p.slot = (p.slot as i64 + delta) as u32;
            }
        }
    }

    /// Drops tombstones and sorts punctures by `(side, slot)`.
    pub fn finish(self) -> SquareDiagram {
        let Editor {
            d,
            dead_nodes,
            dead_punct,
        } = self;
        let mut node_map = vec![u32::MAX; d.nodes.len()];
        let mut next = 0;
        for (i, dead) in dead_nodes.iter().enumerate() {
            if !dead {
                node_map[i] = next;
                next += 1;
            }
        }
        let mut order: Vec<usize> = (0..d.punctures.len()).filter(|&i| !dead_punct[i]).collect();
        order.sort_by_key(|&i| (d.punctures[i].side, d.punctures[i].slot));
        let mut punct_map = vec![u32::MAX; d.punctures.len()];
        for (new, &old) in order.iter().enumerate() {
            punct_map[old] = new as u32;
        }
        let remap = |e: End| match e {
            End::Port(n, p) => {
                let m = node_map[n as usize];
                if m == u32::MAX {
                    End::Open
                } else {
                    End::Port(m, p)
                }
            }
            End::Punct(i) => {
                let m = punct_map[i as usize];
                if m == u32::MAX {
                    End::Open
                } else {
                    End::Punct(m)
                }
            }
            End::Open => End::Open,
        };
        let nodes = d
            .nodes
            .into_iter()
            .zip(dead_nodes)
            .filter(|(_, dead)| !dead)
            .map(|(n, _)| Node {
                kind: n.kind,
                links: n.links.into_iter().map(remap).collect(),
            })
            .collect();
        let punctures = order
            .iter()
            .map(|&i| {
                let p = &d.punctures[i];
                Puncture {
                    side: p.side,
                    slot: p.slot,
                    link: remap(p.link),
                }
            })
            .collect();
        SquareDiagram {
            axis: d.axis,
            nodes,
            punctures,
            free_loops: d.free_loops,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn editor_drops_tombstones_and_sorts_slots() {
        let mut ed = Editor::new(SquareDiagram::new());
        let a = ed.add_puncture(Side::R, 0);
        let b = ed.add_puncture(Side::L, 0);
        ed.connect(a, b);
        let m = ed.add_node(NodeKind::Marker, 2);
        ed.remove_node(m);
        let d = ed.finish();
        assert_eq!(d.nodes().len(), 0);
        assert_eq!(d.punctures()[0].side, Side::L);
        assert_eq!(d.punctures()[0].link, End::Punct(1));
        assert_eq!(d.partner(0), Some(1));
    }

    #[test]
    fn crossing_change_is_an_involution() {
        let mut ed = Editor::new(SquareDiagram::new());
        let x = ed.add_node(NodeKind::Crossing(OverPair::Even), 4);
        ed.connect(End::Port(x, 0), End::Port(x, 1));
        ed.connect(End::Port(x, 2), End::Port(x, 3));
        let d = ed.finish();
        let twice = d.crossing_change(0).unwrap().crossing_change(0).unwrap();
        assert_eq!(d, twice);
        assert!(d.crossing_change(7).is_err());
    }
}

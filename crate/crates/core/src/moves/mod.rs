//! The thirteen R-moves as reversible local rewrites of a [`SquareDiagram`].
//!
//! Every move is located by a [`Site`] and has a direction. Forward moves of
//! the creation/removal kinds (R1, R2, R4, R5, R6, R11) remove structure;
//! backward moves create it. Transfer moves (R7, R8, R9, R12, R13) are
//! forward when the object travels towards the right, top or front. R3 and
//! R10 are their own inverses and only use `Forward` when not reducing.

mod boundary;
pub mod catalogue;
mod local;
mod marker;
mod vertex;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{Editor, End, NodeId, NodeKind, Side, SquareDiagram};
use crate::map::{FrameVertex, PlanarMap};
use crate::{Error, Result};

/// Largest vertex arity handled by the vertex moves R10 and R11.
pub const MAX_VERTEX_ARITY: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
}

impl MoveKind {
    pub const ALL: [MoveKind; 13] = [
        MoveKind::R1,
        MoveKind::R2,
        MoveKind::R3,
        MoveKind::R4,
        MoveKind::R5,
        MoveKind::R6,
        MoveKind::R7,
        MoveKind::R8,
        MoveKind::R9,
        MoveKind::R10,
        MoveKind::R11,
        MoveKind::R12,
        MoveKind::R13,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<MoveKind> {
        Self::ALL.get((n as usize).checked_sub(1)?).copied()
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.number())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// Anchor of a move: the ends that locate the pattern, plus an optional
/// boundary position and a block length for the multi-port moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub ends: Vec<End>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<(Side, u32)>,
    #[serde(default)]
    pub span: u32,
}

impl Site {
    fn ends(ends: Vec<End>) -> Site {
        Site {
            ends,
            ..Site::default()
        }
    }

    fn end(&self, i: usize) -> Result<End> {
        self.ends
            .get(i)
            .copied()
            .ok_or_else(|| na("site is missing an end"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MoveApplication {
    pub kind: MoveKind,
    /// Sub-case: chirality, side or over/under choice, per kind.
    pub variant: u8,
    pub direction: Direction,
    pub site: Site,
}

impl MoveApplication {
    fn new(kind: MoveKind, variant: u8, direction: Direction, site: Site) -> Self {
        MoveApplication {
            kind,
            variant,
            direction,
            site,
        }
    }
}

impl fmt::Display for MoveApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Forward => "+",
            Direction::Backward => "-",
        };
        write!(f, "{}{dir}/{} [", self.kind, self.variant)?;
        for (i, e) in self.site.ends.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match e {
                End::Port(n, p) => write!(f, "{n}.{p}")?,
                End::Punct(i) => write!(f, "p{i}")?,
                End::Open => write!(f, "_")?,
            }
        }
        write!(f, "]")?;
        if let Some((s, k)) = self.site.boundary {
            write!(f, " {}{k}", s.letter())?;
        }
        if self.site.span > 0 {
            write!(f, " x{}", self.site.span)?;
        }
        Ok(())
    }
}

/// Shared read-only view used while enumerating and applying.
pub(crate) struct Ctx<'a> {
    pub d: &'a SquareDiagram,
    pub map: PlanarMap,
    comp: Vec<usize>,
}

impl<'a> Ctx<'a> {
    fn new(d: &'a SquareDiagram) -> Result<Self> {
        let map = PlanarMap::build(d).map_err(|e| Error::Structure(format!("{e:?}")))?;
        let comp = map.components();
        Ok(Ctx { d, map, comp })
    }

    /// Diagram arcs reachable from a face, as the ends their darts leave
    /// from. The placement of a component relative to the others is not
    /// recorded, so every arc of another component counts as reachable.
    fn face_arcs(&self, face: usize) -> Vec<End> {
        let here = self.comp[self.map.vertex_of[self.map.faces[face][0]]];
        let own = self.map.faces[face].iter().copied();
        let others =
            (0..self.map.dart_count()).filter(|&h| self.comp[self.map.vertex_of[h]] != here);
        own.chain(others)
            .filter(|&h| !self.map.is_frame_dart(h))
            .filter_map(|h| self.map.end(h))
            .collect()
    }

    fn face_of(&self, e: End) -> Option<usize> {
        self.map.dart(e).map(|h| self.map.face_of[h])
    }

    /// Every gap between consecutive frame vertices.
    fn gaps(&self) -> Vec<Gap> {
        let frame = &self.map.frame;
        let sides = [Side::B, Side::R, Side::T, Side::L];
        let mut side = Side::B;
        let mut out = Vec::with_capacity(frame.len());
        for i in 0..frame.len() {
            if let FrameVertex::Corner(c) = frame[i] {
                side = sides[c as usize];
            }
            let j = (i + 1) % frame.len();
            let n = self.d.side_count(side) as u32;
            let slot = |v: FrameVertex| match v {
                FrameVertex::Punct(p) => self.d.punctures()[p as usize].slot,
                FrameVertex::Corner(_) => n,
            };
            let k = if side.ccw_increasing() {
                slot(frame[j])
            } else {
                slot(frame[i])
            };
            out.push(Gap {
                side,
                k,
                face: self.map.face_of_frame_gap(i),
            });
        }
        out
    }

    fn gap(&self, side: Side, k: u32) -> Result<Gap> {
        self.gaps()
            .into_iter()
            .find(|g| g.side == side && g.k == k)
            .ok_or_else(|| na("no such boundary gap"))
    }
}

/// A gap on edge `side` where new slots would be inserted at `k`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Gap {
    pub side: Side,
    pub k: u32,
    pub face: usize,
}

pub(crate) fn na(msg: impl Into<String>) -> Error {
    Error::NotApplicable(msg.into())
}

pub(crate) fn port(e: End) -> Option<(NodeId, u8)> {
    match e {
        End::Port(n, p) => Some((n, p)),
        _ => None,
    }
}

/// Crossing port at `e`, if `e` is one.
pub(crate) fn crossing_port(d: &SquareDiagram, e: End) -> Option<(NodeId, u8)> {
    port(e).filter(|&(n, _)| d.node(n).is_crossing())
}

pub(crate) fn marker_port(d: &SquareDiagram, e: End) -> Option<(NodeId, u8)> {
    port(e).filter(|&(n, _)| d.node(n).is_marker())
}

pub(crate) fn is_over(d: &SquareDiagram, n: NodeId, p: u8) -> bool {
    d.node(n).over().is_some_and(|o| o.is_over(p % 4))
}

pub(crate) fn p4(n: NodeId, p: u8) -> End {
    End::Port(n, p % 4)
}

pub(crate) fn on_nodes(e: End, nodes: &[NodeId]) -> bool {
    matches!(e, End::Port(n, _) if nodes.contains(&n))
}

/// The puncture `side[slot]`, as an end.
pub(crate) fn punct(d: &SquareDiagram, side: Side, slot: u32) -> Option<End> {
    d.puncture_at(side, slot).map(End::Punct)
}

pub(crate) fn punct_side_slot(d: &SquareDiagram, e: End) -> Option<(Side, u32)> {
    match e {
        End::Punct(i) => d.punctures().get(i as usize).map(|p| (p.side, p.slot)),
        _ => None,
    }
}

/// Slot following `slot` in counter-clockwise frame order on `side`.
pub(crate) fn ccw_next_slot(side: Side, slot: u32) -> Option<u32> {
    if side.ccw_increasing() {
        Some(slot + 1)
    } else {
        slot.checked_sub(1)
    }
}

fn through(kind: &NodeKind, p: u8) -> u8 {
    match kind {
        NodeKind::Crossing(_) => (p + 2) % 4,
        NodeKind::Marker => 1 - p,
        NodeKind::Vertex(_) => unreachable!("vertices are never spliced out"),
    }
}

/// Removes crossings/markers and reconnects the strands running through
/// them. Strands that close up entirely inside become free loops.
pub(crate) fn splice(ed: &mut Editor, nodes: &[NodeId]) {
    let inside = |e: End| on_nodes(e, nodes);
    let mut seen: HashSet<End> = HashSet::new();
    for &n in nodes {
        for p in 0..ed.d.node(n).arity() as u8 {
            let start = End::Port(n, p);
            let outside = ed.link(start);
            if inside(outside) || seen.contains(&start) {
                continue;
            }
            let mut cur = start;
            loop {
                seen.insert(cur);
                let (cn, cp) = port(cur).expect("inside end is a port");
                let q = End::Port(cn, through(&ed.d.node(cn).kind, cp));
                seen.insert(q);
                let next = ed.link(q);
                if !inside(next) {
                    ed.connect(outside, next);
                    break;
                }
                cur = next;
            }
        }
    }
    for &n in nodes {
        for p in 0..ed.d.node(n).arity() as u8 {
            let start = End::Port(n, p);
            if seen.contains(&start) {
                continue;
            }
            let mut cur = start;
            while seen.insert(cur) {
                let (cn, cp) = port(cur).expect("inside end is a port");
                let q = End::Port(cn, through(&ed.d.node(cn).kind, cp));
                seen.insert(q);
                cur = ed.link(q);
            }
            ed.d.free_loops += 1;
        }
    }
    for &n in nodes {
        ed.remove_node(n);
    }
}

fn candidates(ctx: &Ctx) -> Vec<MoveApplication> {
    let mut out = Vec::new();
    local::candidates(ctx, &mut out);
    marker::candidates(ctx, &mut out);
    boundary::candidates(ctx, &mut out);
    vertex::candidates(ctx, &mut out);
    out
}

fn apply_in(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    match m.kind {
        MoveKind::R1 | MoveKind::R2 | MoveKind::R3 => local::apply(ctx, m),
        MoveKind::R4 | MoveKind::R5 | MoveKind::R9 | MoveKind::R12 => marker::apply(ctx, m),
        MoveKind::R6 | MoveKind::R7 | MoveKind::R8 | MoveKind::R13 => boundary::apply(ctx, m),
        MoveKind::R10 | MoveKind::R11 => vertex::apply(ctx, m),
    }
}

/// All applicable moves together with their results, in canonical site order.
pub fn expand(d: &SquareDiagram) -> Vec<(MoveApplication, SquareDiagram)> {
    let Ok(ctx) = Ctx::new(d) else {
        return Vec::new();
    };
    let mut cands = candidates(&ctx);
    cands.sort();
    cands.dedup();
    cands
        .into_iter()
        .filter_map(|m| apply_in(&ctx, &m).ok().map(|r| (m, r)))
        .collect()
}

/// Every applicable move of every kind and variant.
pub fn enumerate_moves(d: &SquareDiagram) -> Vec<MoveApplication> {
    expand(d).into_iter().map(|(m, _)| m).collect()
}

pub fn apply_move(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let ctx = Ctx::new(d)?;
    apply_in(&ctx, m)
}

/// Crossing change as a rewrite; the untangling operation.
pub fn crossing_change(d: &SquareDiagram, crossing: NodeId) -> Result<SquareDiagram> {
    d.crossing_change(crossing)
}

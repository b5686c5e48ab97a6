//! Moves involving the front/back faces: R4 (finger past a marker), R5
//! (marker pairs), R9 (marker through an edge) and R12 (vertex through the
//! front/back faces).
//!
//! Marker port 0 (the dot) faces the part of the strand nearer the front.

use super::{
    crossing_port, is_over, marker_port, na, on_nodes, p4, port, splice, Ctx, Direction,
    MoveApplication, MoveKind, Site,
};
use crate::diagram::{Editor, End, NodeId, NodeKind, OverPair, Side, SquareDiagram};
use crate::Result;

use Direction::{Backward, Forward};
use MoveKind::{R12, R4, R5, R9};

fn m2(n: NodeId, p: u8) -> End {
    End::Port(n, p)
}

fn markers(d: &SquareDiagram) -> impl Iterator<Item = NodeId> + '_ {
    (0..d.nodes().len() as NodeId).filter(|&n| d.node(n).is_marker())
}

pub(super) fn candidates(ctx: &Ctx, out: &mut Vec<MoveApplication>) {
    let d = ctx.d;
    for mk in markers(d) {
        for m in 0..2u8 {
            out.push(MoveApplication::new(
                R4,
                0,
                Forward,
                Site::ends(vec![m2(mk, m)]),
            ));
            if d.link(m2(mk, 0)) == m2(mk, 1) {
                continue;
            }
            let face = ctx.face_of(m2(mk, m)).expect("marker dart");
            for x in ctx.face_arcs(face) {
                let y = d.link(x);
                if on_nodes(x, &[mk]) || on_nodes(y, &[mk]) {
                    continue;
                }
                out.push(MoveApplication::new(
                    R4,
                    0,
                    Backward,
                    Site::ends(vec![m2(mk, m), x]),
                ));
            }
        }
        for a in 0..2u8 {
            if let Some((other, b)) = marker_port(d, d.link(m2(mk, a))) {
                if other > mk && a == b {
                    out.push(MoveApplication::new(
                        R5,
                        a,
                        Forward,
                        Site::ends(vec![m2(mk, a)]),
                    ));
                }
            }
            if let End::Punct(_) = d.link(m2(mk, a)) {
                let dir = r9_direction(d, d.link(m2(mk, a)));
                out.push(MoveApplication::new(
                    R9,
                    0,
                    dir,
                    Site::ends(vec![m2(mk, a)]),
                ));
            }
        }
    }
    for (a, b) in d.arcs() {
        if b != End::Open {
            for v in 0..2 {
                out.push(MoveApplication::new(R5, v, Backward, Site::ends(vec![a])));
            }
        }
    }
    if d.free_loops() > 0 {
        out.push(MoveApplication::new(R5, 2, Backward, Site::default()));
    }
    for (v, node) in d.nodes().iter().enumerate() {
        if node.is_vertex() {
            for dir in [Forward, Backward] {
                out.push(MoveApplication::new(
                    R12,
                    0,
                    dir,
                    Site::ends(vec![m2(v as NodeId, 0)]),
                ));
            }
        }
    }
}

pub(super) fn apply(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    match (m.kind, m.direction) {
        (R4, Forward) => r4_remove(ctx.d, m),
        (R4, Backward) => r4_add(ctx, m),
        (R5, Forward) => r5_remove(ctx.d, m),
        (R5, Backward) => r5_add(ctx.d, m),
        (R9, _) => r9(ctx.d, m),
        (R12, _) => r12(ctx.d, m),
        _ => Err(na("unknown move")),
    }
}

fn marker_site(d: &SquareDiagram, e: End) -> Result<(NodeId, u8)> {
    marker_port(d, e).ok_or_else(|| na("site is not a marker"))
}

/// Triangle `M.m -> c -> c2 -> M` where `c` and `c2` are crossings and the
/// strand through the marker is over next to the dot and under next to
/// the circle.
fn r4_remove(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (mk, mp) = marker_site(d, m.site.end(0)?)?;
    let no = || na("no R4 triangle");
    let (c, k) = crossing_port(d, d.link(m2(mk, mp))).ok_or_else(no)?;
    let (c2, j) = crossing_port(d, d.link(p4(c, k + 3))).ok_or_else(no)?;
    if c == c2 || d.link(p4(c2, j + 3)) != m2(mk, 1 - mp) {
        return Err(no());
    }
    // Strand-through-marker port at the dot-side and circle-side crossings.
    let ((dot, dp), (circ, cp)) = if mp == 0 {
        ((c, k), (c2, j + 3))
    } else {
        ((c2, j + 3), (c, k))
    };
    if !is_over(d, dot, dp) || is_over(d, circ, cp) {
        return Err(na("R4 over/under pattern does not match"));
    }
    let outside = [p4(c, k + 1), p4(c, k + 2), p4(c2, j + 1), p4(c2, j + 2)];
    if outside.iter().any(|&e| on_nodes(d.link(e), &[c, c2])) {
        return Err(na("R4 strands close up"));
    }
    let mut ed = Editor::new(d.clone());
    splice(&mut ed, &[c, c2]);
    Ok(ed.finish())
}

fn r4_add(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    let d = ctx.d;
    let (mk, mp) = marker_site(d, m.site.end(0)?)?;
    let x = m.site.end(1)?;
    let y = d.link(x);
    if d.link(m2(mk, 0)) == m2(mk, 1) || on_nodes(x, &[mk]) || on_nodes(y, &[mk]) {
        return Err(na("degenerate R4 site"));
    }
    let face = ctx.face_of(m2(mk, mp)).ok_or_else(|| na("bad marker"))?;
    if !ctx.face_arcs(face).contains(&x) {
        return Err(na("arc does not face the marker"));
    }
    let u = d.link(m2(mk, 0));
    let w = d.link(m2(mk, 1));
    let mut ed = Editor::new(d.clone());
    let c1 = ed.add_node(NodeKind::Crossing(OverPair::Odd), 4);
    let c2 = ed.add_node(NodeKind::Crossing(OverPair::Even), 4);
    ed.connect(p4(c1, 1), u);
    ed.connect(p4(c1, 3), m2(mk, 0));
    ed.connect(p4(c2, 1), m2(mk, 1));
    ed.connect(p4(c2, 3), w);
    if mp == 1 {
        ed.connect(p4(c1, 0), y);
        ed.connect(p4(c1, 2), p4(c2, 2));
        ed.connect(p4(c2, 0), x);
    } else {
        ed.connect(p4(c1, 0), p4(c2, 0));
        ed.connect(p4(c1, 2), x);
        ed.connect(p4(c2, 2), y);
    }
    Ok(ed.finish())
}

fn r5_remove(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (mk, a) = marker_site(d, m.site.end(0)?)?;
    let (other, b) = marker_port(d, d.link(m2(mk, a))).ok_or_else(|| na("no marker pair"))?;
    if a != b || other == mk {
        return Err(na("markers are not joined dot to dot or circle to circle"));
    }
    let mut ed = Editor::new(d.clone());
    splice(&mut ed, &[mk, other]);
    Ok(ed.finish())
}

fn r5_add(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let mut ed = Editor::new(d.clone());
    let mk = ed.add_node(NodeKind::Marker, 2);
    let other = ed.add_node(NodeKind::Marker, 2);
    if m.variant == 2 {
        if d.free_loops() == 0 {
            return Err(na("no free loop"));
        }
        ed.d.free_loops -= 1;
        ed.connect(m2(mk, 0), m2(other, 0));
        ed.connect(m2(mk, 1), m2(other, 1));
        return Ok(ed.finish());
    }
    let a = m.variant & 1;
    let e1 = m.site.end(0)?;
    let e2 = d.link(e1);
    if e2 == End::Open {
        return Err(na("open arc"));
    }
    ed.connect(e1, m2(mk, 1 - a));
    ed.connect(m2(mk, a), m2(other, a));
    ed.connect(m2(other, 1 - a), e2);
    Ok(ed.finish())
}

fn r9_direction(d: &SquareDiagram, pe: End) -> Direction {
    match pe {
        End::Punct(i) if matches!(d.punctures()[i as usize].side, Side::R | Side::T) => Forward,
        _ => Backward,
    }
}

fn r9(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (mk, a) = marker_site(d, m.site.end(0)?)?;
    let End::Punct(i) = d.link(m2(mk, a)) else {
        return Err(na("marker is not next to an edge"));
    };
    if r9_direction(d, End::Punct(i)) != m.direction {
        return Err(na("wrong direction"));
    }
    let j = d.partner(i).ok_or_else(|| na("unpaired puncture"))?;
    let x = d.link(m2(mk, 1 - a));
    let y = d.link(End::Punct(j));
    let involved = [m2(mk, 0), m2(mk, 1), End::Punct(i), End::Punct(j)];
    if involved.contains(&x) || involved.contains(&y) {
        return Err(na("degenerate R9 site"));
    }
    let mut ed = Editor::new(d.clone());
    ed.connect(x, End::Punct(i));
    ed.connect(End::Punct(j), m2(mk, 1 - a));
    ed.connect(m2(mk, a), y);
    Ok(ed.finish())
}

/// Forward pushes the vertex through the front face: markers whose dot
/// faces the vertex disappear and every other edge gains a marker with its
/// circle towards the vertex. Backward is the mirror image.
fn r12(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let v = port(m.site.end(0)?)
        .map(|(n, _)| n)
        .filter(|&n| d.node(n).is_vertex())
        .ok_or_else(|| na("R12 site is not a vertex"))?;
    let (facing, away) = match m.direction {
        Forward => (0u8, 1u8),
        Backward => (1, 0),
    };
    let arity = d.node(v).arity() as u8;
    let mut ed = Editor::new(d.clone());
    let mut plan = Vec::new();
    for p in 0..arity {
        let z = d.link(m2(v, p));
        if on_nodes(z, &[v]) {
            return Err(na("vertex has a loop"));
        }
        match marker_port(d, z) {
            Some((mk, q)) if q == facing => {
                let w = d.link(m2(mk, away));
                if on_nodes(w, &[v]) || marker_port(d, w).is_some_and(|(_, r)| r == away) {
                    return Err(na("R12 would not be invertible here"));
                }
                plan.push((p, Some((mk, w)), z));
            }
            _ => plan.push((p, None, z)),
        }
    }
    for (p, removed, z) in plan {
        match removed {
            Some((mk, w)) => {
                ed.remove_node(mk);
                ed.connect(m2(v, p), w);
            }
            None => {
                let n = ed.add_node(NodeKind::Marker, 2);
                ed.connect(m2(v, p), m2(n, away));
                ed.connect(m2(n, facing), z);
            }
        }
    }
    Ok(ed.finish())
}

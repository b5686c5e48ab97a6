//! Moves across the square's edges and corners: R6 (caps), R7 (crossings),
//! R8 (corners) and R13 (vertices).
//!
//! New slots always follow the counter-clockwise order of the frame, so
//! ports listed counter-clockwise around a node attach to punctures listed
//! counter-clockwise along the frame.

use super::{
    ccw_next_slot, crossing_port, na, on_nodes, p4, port, punct, punct_side_slot, Ctx, Direction,
    MoveApplication, MoveKind, Site,
};
use crate::diagram::{Editor, End, NodeId, Side, SquareDiagram};
use crate::Result;

use Direction::{Backward, Forward};
use MoveKind::{R13, R6, R7, R8};

/// Moving through the right or top edge is forward.
fn toward(side: Side) -> Direction {
    match side {
        Side::R | Side::T => Forward,
        Side::L | Side::B => Backward,
    }
}

/// Slot of the `t`-th (0-based) of `m` new punctures at `k`, in
/// counter-clockwise order along `side`.
fn ccw_slot(side: Side, k: u32, m: u32, t: u32) -> u32 {
    if side.ccw_increasing() {
        k + t
    } else {
        k + m - 1 - t
    }
}

pub(super) fn candidates(ctx: &Ctx, out: &mut Vec<MoveApplication>) {
    let d = ctx.d;
    let gaps = ctx.gaps();
    for p in d.punctures() {
        if let Some((s, k)) = punct_side_slot(d, p.link) {
            if s == p.side && k == p.slot + 1 {
                out.push(MoveApplication::new(
                    R6,
                    0,
                    Forward,
                    Site {
                        boundary: Some((p.side, p.slot)),
                        ..Site::default()
                    },
                ));
            }
        }
    }
    for g in &gaps {
        for x in ctx.face_arcs(g.face) {
            out.push(MoveApplication::new(
                R6,
                0,
                Backward,
                Site {
                    ends: vec![x],
                    boundary: Some((g.side, g.k)),
                    span: 0,
                },
            ));
        }
        if d.free_loops() > 0 && matches!(g.side, Side::L | Side::B) {
            out.push(MoveApplication::new(
                R6,
                1,
                Backward,
                Site {
                    boundary: Some((g.side, g.k)),
                    ..Site::default()
                },
            ));
        }
    }
    for c in d.crossings() {
        for q in 0..4u8 {
            if let Some((s, _)) = punct_side_slot(d, d.link(p4(c, q))) {
                out.push(MoveApplication::new(
                    R7,
                    0,
                    toward(s),
                    Site::ends(vec![p4(c, q)]),
                ));
            }
        }
    }
    for v in 0..2 {
        for dir in [Forward, Backward] {
            out.push(MoveApplication::new(R8, v, dir, Site::default()));
        }
    }
    for (v, node) in d.nodes().iter().enumerate() {
        if !node.is_vertex() {
            continue;
        }
        let v = v as NodeId;
        let arity = node.arity() as u8;
        for side in Side::ALL {
            let linked: Vec<u8> = (0..arity)
                .filter(|&p| {
                    punct_side_slot(d, d.link(End::Port(v, p))).is_some_and(|(s, _)| s == side)
                })
                .collect();
            if linked.is_empty() {
                for g in gaps.iter().filter(|g| g.side == side) {
                    for i in 0..arity {
                        let sector = End::Port(v, (i + arity - 1) % arity);
                        if ctx.face_of(sector) == Some(g.face) {
                            out.push(MoveApplication::new(
                                R13,
                                0,
                                toward(side),
                                Site {
                                    ends: vec![End::Port(v, i)],
                                    boundary: Some((side, g.k)),
                                    span: 0,
                                },
                            ));
                        }
                    }
                }
            } else {
                for &i in &linked {
                    out.push(MoveApplication::new(
                        R13,
                        0,
                        toward(side),
                        Site {
                            ends: vec![End::Port(v, i)],
                            boundary: None,
                            span: linked.len() as u32,
                        },
                    ));
                }
            }
        }
    }
}

pub(super) fn apply(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    match (m.kind, m.direction) {
        (R6, Forward) => r6_remove(ctx.d, m),
        (R6, Backward) => r6_add(ctx, m),
        (R7, _) => r7(ctx.d, m),
        (R8, _) => r8(ctx.d, m),
        (R13, _) => r13(ctx, m),
        _ => Err(na("unknown move")),
    }
}

fn boundary(m: &MoveApplication) -> Result<(Side, u32)> {
    m.site
        .boundary
        .ok_or_else(|| na("site has no boundary position"))
}

fn r6_remove(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (s, k) = boundary(m)?;
    let no = || na("no cap at site");
    let a = punct(d, s, k).ok_or_else(no)?;
    let b = punct(d, s, k + 1).ok_or_else(no)?;
    if d.link(a) != b {
        return Err(no());
    }
    let o = s.opposite();
    let (p, q) = (
        punct(d, o, k).ok_or_else(no)?,
        punct(d, o, k + 1).ok_or_else(no)?,
    );
    let mut ed = Editor::new(d.clone());
    if d.link(p) == q {
        ed.d.free_loops += 1;
    } else {
        ed.connect(d.link(p), d.link(q));
    }
    for e in [a, b, p, q] {
        ed.remove_puncture(e);
    }
    ed.shift_slots(s, k + 2, -2);
    Ok(ed.finish())
}

fn r6_add(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    let d = ctx.d;
    let (o, k) = boundary(m)?;
    let gap = ctx.gap(o, k)?;
    let s = o.opposite();
    let mut ed = Editor::new(d.clone());
    let mut arc = None;
    if m.variant == 1 {
        if d.free_loops() == 0 {
            return Err(na("no free loop"));
        }
        ed.d.free_loops -= 1;
    } else {
        let x = m.site.end(0)?;
        if !ctx.face_arcs(gap.face).contains(&x) {
            return Err(na("arc does not face the gap"));
        }
        arc = Some((x, d.link(x)));
    }
    ed.shift_slots(o, k, 2);
    let cap0 = ed.add_puncture(s, k);
    let cap1 = ed.add_puncture(s, k + 1);
    ed.connect(cap0, cap1);
    let o0 = ed.add_puncture(o, k);
    let o1 = ed.add_puncture(o, k + 1);
    match arc {
        None => ed.connect(o0, o1),
        Some((x, y)) => {
            let (first, second) = if o.ccw_increasing() {
                (o0, o1)
            } else {
                (o1, o0)
            };
            ed.connect(first, y);
            ed.connect(second, x);
        }
    }
    Ok(ed.finish())
}

fn r7(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (c, q) = crossing_port(d, m.site.end(0)?).ok_or_else(|| na("R7 site is not a crossing"))?;
    let no = || na("crossing does not meet an edge twice");
    let pa = d.link(p4(c, q));
    let pb = d.link(p4(c, q + 1));
    let (s, a) = punct_side_slot(d, pa).ok_or_else(no)?;
    let (s2, b) = punct_side_slot(d, pb).ok_or_else(no)?;
    if s2 != s || ccw_next_slot(s, a) != Some(b) {
        return Err(no());
    }
    if toward(s) != m.direction {
        return Err(na("wrong direction"));
    }
    let o = s.opposite();
    let (oa, ob) = (
        punct(d, o, a).ok_or_else(no)?,
        punct(d, o, b).ok_or_else(no)?,
    );
    let (x2, x3) = (d.link(p4(c, q + 2)), d.link(p4(c, q + 3)));
    let (ya, yb) = (d.link(oa), d.link(ob));
    let involved = [pa, pb, oa, ob];
    if [x2, x3, ya, yb]
        .iter()
        .any(|&e| on_nodes(e, &[c]) || involved.contains(&e))
    {
        return Err(na("degenerate R7 site"));
    }
    let mut ed = Editor::new(d.clone());
    ed.connect(p4(c, q), ya);
    ed.connect(p4(c, q + 1), yb);
    ed.connect(p4(c, q + 2), ob);
    ed.connect(p4(c, q + 3), oa);
    ed.connect(pb, x2);
    ed.connect(pa, x3);
    Ok(ed.finish())
}

/// Variant 0 moves a corner-cutting arc between the bottom-left and
/// top-right corners, variant 1 between the top-left and bottom-right.
fn r8(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let nl = d.side_count(Side::L) as u32;
    let nb = d.side_count(Side::B) as u32;
    if nl == 0 || nb == 0 {
        return Err(na("no punctures"));
    }
    let (ll, lb) = (nl - 1, nb - 1);
    let at = |s: Side, k: u32| punct(d, s, k).ok_or_else(|| na("missing puncture"));
    use Side::{B, L, R, T};
    // (cut, a-end, b-end) of the current pattern, then where the slots go.
    let (cut, a_at, b_at, lr_old, bt_old, lr_new, bt_new) = match (m.variant, m.direction) {
        (0, Forward) => ((at(L, 0)?, at(B, 0)?), at(R, 0)?, at(T, 0)?, 0, 0, ll, lb),
        (0, Backward) => (
            (at(T, lb)?, at(R, ll)?),
            at(B, lb)?,
            at(L, ll)?,
            ll,
            lb,
            0,
            0,
        ),
        (1, Forward) => ((at(L, ll)?, at(T, 0)?), at(R, ll)?, at(B, 0)?, ll, 0, 0, lb),
        (1, Backward) => ((at(B, lb)?, at(R, 0)?), at(T, lb)?, at(L, 0)?, 0, lb, ll, 0),
        _ => return Err(na("unknown R8 variant")),
    };
    if d.link(cut.0) != cut.1 {
        return Err(na("no arc cuts the corner"));
    }
    let old = [
        at(L, lr_old)?,
        at(R, lr_old)?,
        at(B, bt_old)?,
        at(T, bt_old)?,
    ];
    let (a, b) = (d.link(a_at), d.link(b_at));
    if old.contains(&a) || old.contains(&b) {
        return Err(na("degenerate R8 site"));
    }
    let mut ed = Editor::new(d.clone());
    for e in old {
        ed.remove_puncture(e);
    }
    let shift = |ed: &mut Editor, side: Side, old: u32| {
        if old == 0 {
            ed.shift_slots(side, 1, -1);
        } else {
            ed.shift_slots(side, 0, 1);
        }
    };
    shift(&mut ed, L, lr_old);
    shift(&mut ed, B, bt_old);
    let nl_ = ed.add_puncture(L, lr_new);
    let nr = ed.add_puncture(R, lr_new);
    let nb_ = ed.add_puncture(B, bt_new);
    let nt = ed.add_puncture(T, bt_new);
    match (m.variant, m.direction) {
        (0, Forward) => {
            ed.connect(a, nb_);
            ed.connect(nt, nr);
            ed.connect(nl_, b);
        }
        (0, Backward) => {
            ed.connect(a, nr);
            ed.connect(nl_, nb_);
            ed.connect(nt, b);
        }
        (1, Forward) => {
            ed.connect(a, nt);
            ed.connect(nb_, nr);
            ed.connect(nl_, b);
        }
        _ => {
            ed.connect(a, nr);
            ed.connect(nl_, nt);
            ed.connect(nb_, b);
        }
    }
    Ok(ed.finish())
}

/// Vertex `v` passes through edge `s`: the block of ports that left through
/// `s` now reach their targets directly, and every other port leaves
/// through the opposite edge.
fn r13(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    let d = ctx.d;
    let (v, i) = port(m.site.end(0)?)
        .filter(|&(n, _)| d.node(n).is_vertex())
        .ok_or_else(|| na("R13 site is not a vertex"))?;
    let arity = d.node(v).arity() as u32;
    let at = |t: u32| End::Port(v, ((i as u32 + t) % arity) as u8);
    let (s, k, block) = if m.site.span == 0 {
        let (s, k) = boundary(m)?;
        let gap = ctx.gap(s, k)?;
        let sector = at(arity - 1);
        if ctx.face_of(sector) != Some(gap.face) {
            return Err(na("vertex does not face the gap"));
        }
        if (0..arity).any(|t| punct_side_slot(d, d.link(at(t))).is_some_and(|(x, _)| x == s)) {
            return Err(na("vertex already meets the edge"));
        }
        (s, k, Vec::new())
    } else {
        let j = m.site.span;
        if j > arity {
            return Err(na("block longer than arity"));
        }
        let no = || na("ports do not meet one edge consecutively");
        let mut block = Vec::new();
        for t in 0..j {
            block.push(punct_side_slot(d, d.link(at(t))).ok_or_else(no)?);
        }
        let s = block[0].0;
        for t in 1..j as usize {
            if block[t].0 != s || ccw_next_slot(s, block[t - 1].1) != Some(block[t].1) {
                return Err(no());
            }
        }
        for t in j..arity {
            if punct_side_slot(d, d.link(at(t))).is_some_and(|(x, _)| x == s) {
                return Err(no());
            }
        }
        if j == arity && ccw_next_slot(s, block[j as usize - 1].1) == Some(block[0].1) {
            return Err(no());
        }
        let k = block.iter().map(|b| b.1).min().expect("non-empty block");
        (s, k, block)
    };
    if toward(s) != m.direction {
        return Err(na("wrong direction"));
    }
    let o = s.opposite();
    let j = block.len() as u32;
    let n = arity - j;
    let mut olds = Vec::new();
    let mut direct = Vec::new();
    for (t, &(_, slot)) in block.iter().enumerate() {
        let here = punct(d, s, slot).expect("block puncture");
        let there = punct(d, o, slot).ok_or_else(|| na("unpaired puncture"))?;
        olds.push(here);
        olds.push(there);
        direct.push((at(t as u32), d.link(there)));
    }
    let rest: Vec<(End, End)> = (j..arity).map(|t| (at(t), d.link(at(t)))).collect();
    for &(_, e) in direct.iter().chain(&rest) {
        if on_nodes(e, &[v]) || olds.contains(&e) {
            return Err(na("degenerate R13 site"));
        }
    }
    // A port reaching the far edge directly would join the new block.
    if direct
        .iter()
        .any(|&(_, w)| punct_side_slot(d, w).is_some_and(|(x, _)| x == o))
    {
        return Err(na("R13 would not be invertible here"));
    }
    let mut ed = Editor::new(d.clone());
    for &e in &olds {
        ed.remove_puncture(e);
    }
    ed.shift_slots(s, k + j, n as i64 - j as i64);
    for (a, w) in direct {
        ed.connect(a, w);
    }
    for (t, (c, z)) in rest.into_iter().enumerate() {
        let slot = ccw_slot(o, k, n, t as u32);
        let out = ed.add_puncture(o, slot);
        let back = ed.add_puncture(s, slot);
        ed.connect(c, out);
        ed.connect(back, z);
    }
    Ok(ed.finish())
}

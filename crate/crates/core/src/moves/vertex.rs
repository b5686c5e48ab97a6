//! Vertex moves: R10 (a strand sliding over or under a vertex) and R11
//! (untwisting two edges of a vertex).

use super::{
    crossing_port, is_over, na, on_nodes, p4, port, Ctx, Direction, MoveApplication, MoveKind,
    Site, MAX_VERTEX_ARITY,
};
use crate::diagram::{Editor, End, NodeId, NodeKind, OverPair, SquareDiagram};
use crate::Result;

use Direction::{Backward, Forward};
use MoveKind::{R10, R11};

fn vp(v: NodeId, arity: usize, p: usize) -> End {
    End::Port(v, (p % arity) as u8)
}

fn r10_direction(arity: usize, j: usize) -> Direction {
    if 2 * j >= arity {
        Forward
    } else {
        Backward
    }
}

pub(super) fn candidates(ctx: &Ctx, out: &mut Vec<MoveApplication>) {
    let d = ctx.d;
    for (v, node) in d.nodes().iter().enumerate() {
        let arity = node.arity();
        if !node.is_vertex() || arity > MAX_VERTEX_ARITY {
            continue;
        }
        let v = v as NodeId;
        for i in 0..arity {
            let mut j = 0;
            while j < arity && crossing_port(d, d.link(vp(v, arity, i + j))).is_some() {
                j += 1;
                out.push(MoveApplication::new(
                    R10,
                    0,
                    r10_direction(arity, j),
                    Site {
                        ends: vec![vp(v, arity, i)],
                        boundary: None,
                        span: j as u32,
                    },
                ));
            }
            let face = ctx
                .face_of(vp(v, arity, i + arity - 1))
                .expect("vertex dart");
            for x in ctx.face_arcs(face) {
                if on_nodes(x, &[v]) || on_nodes(d.link(x), &[v]) {
                    continue;
                }
                for over in 0..2 {
                    out.push(MoveApplication::new(
                        R10,
                        over,
                        Backward,
                        Site::ends(vec![vp(v, arity, i), x]),
                    ));
                }
            }
            if arity >= 2 {
                out.push(MoveApplication::new(
                    R11,
                    0,
                    Forward,
                    Site::ends(vec![vp(v, arity, i)]),
                ));
                for over in 0..2 {
                    out.push(MoveApplication::new(
                        R11,
                        over,
                        Backward,
                        Site::ends(vec![vp(v, arity, i)]),
                    ));
                }
            }
        }
    }
}

pub(super) fn apply(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    match (m.kind, m.direction) {
        (R10, _) => r10(ctx, m),
        (R11, Forward) => r11_remove(ctx.d, m),
        (R11, Backward) => r11_add(ctx.d, m),
        _ => Err(na("unknown move")),
    }
}

fn vertex_site(d: &SquareDiagram, m: &MoveApplication) -> Result<(NodeId, usize, usize)> {
    let (v, i) = port(m.site.end(0)?)
        .filter(|&(n, _)| d.node(n).is_vertex())
        .ok_or_else(|| na("site is not a vertex"))?;
    let arity = d.node(v).arity();
    if arity > MAX_VERTEX_ARITY {
        return Err(na("vertex arity above the supported maximum"));
    }
    Ok((v, i as usize, arity))
}

/// Strand `t` crosses the `j` consecutive edges at ports `i..i+j` (counter-
/// clockwise), all over or all under, running from `t_a` to `t_b`. It is
/// moved to the other side of the vertex, where it crosses the remaining
/// edges clockwise.
fn r10(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    let d = ctx.d;
    let (v, i, arity) = vertex_site(d, m)?;
    let j = m.site.span as usize;
    if j > arity {
        return Err(na("block longer than arity"));
    }
    let mut block = Vec::with_capacity(j);
    for t in 0..j {
        let c = crossing_port(d, d.link(vp(v, arity, i + t)))
            .ok_or_else(|| na("edge is not crossed"))?;
        block.push(c);
    }
    let nodes: Vec<NodeId> = block.iter().map(|&(c, _)| c).collect();
    for (x, &(c, _)) in block.iter().enumerate() {
        if on_nodes(End::Port(c, 0), &nodes[..x]) || c == v {
            return Err(na("strand meets an edge twice"));
        }
    }
    let (t_a, t_b, t_over) = if j == 0 {
        let x = m.site.end(1)?;
        let face = ctx
            .face_of(vp(v, arity, i + arity - 1))
            .ok_or_else(|| na("bad vertex"))?;
        if !ctx.face_arcs(face).contains(&x) {
            return Err(na("arc does not face the vertex"));
        }
        (x, d.link(x), m.variant == 1)
    } else {
        for t in 1..j {
            let (c, e) = block[t - 1];
            let (c2, e2) = block[t];
            if d.link(p4(c, e + 3)) != p4(c2, e2 + 1) {
                return Err(na("crossings are not consecutive along one strand"));
            }
        }
        let over = is_over(d, block[0].0, block[0].1 + 1);
        if block.iter().any(|&(c, e)| is_over(d, c, e + 1) != over) {
            return Err(na("strand is not over (or under) every edge"));
        }
        let (c0, e0) = block[0];
        let (cl, el) = block[j - 1];
        (d.link(p4(c0, e0 + 1)), d.link(p4(cl, el + 3)), over)
    };
    if r10_direction(arity, j) != m.direction && j > 0 {
        return Err(na("wrong direction"));
    }
    let ys: Vec<End> = block.iter().map(|&(c, e)| d.link(p4(c, e + 2))).collect();
    // Remaining ports, clockwise from the one before the block.
    let rest: Vec<(End, End)> = (1..=arity - j)
        .map(|t| {
            let p = vp(v, arity, i + arity * 2 - t);
            (p, d.link(p))
        })
        .collect();
    let outside = ys
        .iter()
        .chain(rest.iter().map(|(_, z)| z))
        .chain([&t_a, &t_b]);
    for &e in outside {
        if on_nodes(e, &nodes) || on_nodes(e, &[v]) {
            return Err(na("degenerate R10 site"));
        }
    }
    let mut ed = Editor::new(d.clone());
    for (t, &y) in ys.iter().enumerate() {
        ed.connect(vp(v, arity, i + t), y);
    }
    for &c in &nodes {
        ed.remove_node(c);
    }
    let kind = NodeKind::Crossing(if t_over {
        OverPair::Odd
    } else {
        OverPair::Even
    });
    let mut prev = t_a;
    for (p, z) in rest {
        let n = ed.add_node(kind.clone(), 4);
        ed.connect(p4(n, 0), p);
        ed.connect(p4(n, 2), z);
        ed.connect(prev, p4(n, 3));
        prev = p4(n, 1);
    }
    ed.connect(prev, t_b);
    Ok(ed.finish())
}

fn r11_remove(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (v, i, arity) = vertex_site(d, m)?;
    let (c, q) =
        crossing_port(d, d.link(vp(v, arity, i))).ok_or_else(|| na("edge is not crossed"))?;
    if arity < 2 || d.link(vp(v, arity, i + 1)) != p4(c, q + 3) {
        return Err(na("edges do not cross next to the vertex"));
    }
    let (x, y) = (d.link(p4(c, q + 1)), d.link(p4(c, q + 2)));
    if on_nodes(x, &[c]) || on_nodes(y, &[c]) {
        return Err(na("degenerate R11 site"));
    }
    let mut ed = Editor::new(d.clone());
    ed.remove_node(c);
    ed.connect(vp(v, arity, i), x);
    ed.connect(vp(v, arity, i + 1), y);
    Ok(ed.finish())
}

fn r11_add(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (v, i, arity) = vertex_site(d, m)?;
    let (a, b) = (vp(v, arity, i), vp(v, arity, i + 1));
    let (x, y) = (d.link(a), d.link(b));
    if arity < 2 || x == b {
        return Err(na("edges form a loop"));
    }
    let mut ed = Editor::new(d.clone());
    let over = if m.variant == 1 {
        OverPair::Odd
    } else {
        OverPair::Even
    };
    let c = ed.add_node(NodeKind::Crossing(over), 4);
    ed.connect(p4(c, 0), a);
    ed.connect(p4(c, 3), b);
    ed.connect(p4(c, 1), x);
    ed.connect(p4(c, 2), y);
    Ok(ed.finish())
}

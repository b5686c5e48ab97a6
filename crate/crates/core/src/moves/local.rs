//! R1 (curls), R2 (bigons) and R3 (triangles).

use super::{
    crossing_port, is_over, na, on_nodes, p4, splice, Ctx, Direction, MoveApplication, MoveKind,
    Site,
};
use crate::diagram::{Editor, End, NodeId, NodeKind, OverPair, SquareDiagram};
use crate::Result;

use Direction::{Backward, Forward};
use MoveKind::{R1, R2, R3};

fn over_of(bit: u8) -> OverPair {
    if bit == 0 {
        OverPair::Even
    } else {
        OverPair::Odd
    }
}

pub(super) fn candidates(ctx: &Ctx, out: &mut Vec<MoveApplication>) {
    let d = ctx.d;
    for c in d.crossings() {
        for q in 0..4u8 {
            if d.link(p4(c, q)) == p4(c, q + 1) {
                out.push(MoveApplication::new(
                    R1,
                    0,
                    Forward,
                    Site::ends(vec![p4(c, q)]),
                ));
            }
        }
    }
    for (a, b) in d.arcs() {
        if b == End::Open {
            continue;
        }
        for v in 0..4 {
            out.push(MoveApplication::new(R1, v, Backward, Site::ends(vec![a])));
        }
    }
    if d.free_loops() > 0 {
        for v in 4..6 {
            out.push(MoveApplication::new(R1, v, Backward, Site::default()));
        }
    }

    for a in d.crossings() {
        for i in 0..4u8 {
            let Some((b, j)) = crossing_port(d, d.link(p4(a, i))) else {
                continue;
            };
            // The same bigon is seen from (b, j - 1); keep the smaller anchor.
            if b != a && p4(a, i) < p4(b, j + 3) {
                out.push(MoveApplication::new(
                    R2,
                    0,
                    Forward,
                    Site::ends(vec![p4(a, i)]),
                ));
            }
        }
    }
    // Bigons whose strands close up: from two free loops, or a free loop
    // pushed across an arc from either side.
    if d.free_loops() >= 2 {
        for v in 2..4 {
            out.push(MoveApplication::new(R2, v, Backward, Site::default()));
        }
    }
    if d.free_loops() >= 1 {
        for (a, b) in d.arcs() {
            if b != End::Open {
                for v in 4..8 {
                    out.push(MoveApplication::new(R2, v, Backward, Site::ends(vec![a])));
                }
            }
        }
    }
    for face in 0..ctx.map.faces.len() {
        let arcs = ctx.face_arcs(face);
        for (x, &a1) in arcs.iter().enumerate() {
            for &a2 in &arcs[x + 1..] {
                for v in 0..2 {
                    out.push(MoveApplication::new(
                        R2,
                        v,
                        Backward,
                        Site::ends(vec![a1, a2]),
                    ));
                }
            }
        }
    }

    for c in d.crossings() {
        for p in 0..4u8 {
            if let Some(t) = triangle(d, c, p) {
                if t.iter().all(|&(n, q)| (c, p) <= (n, q)) {
                    out.push(MoveApplication::new(
                        R3,
                        0,
                        Forward,
                        Site::ends(vec![p4(c, p)]),
                    ));
                }
            }
        }
    }
}

pub(super) fn apply(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    match (m.kind, m.direction) {
        (R1, Forward) => r1_remove(ctx.d, m),
        (R1, Backward) => r1_add(ctx.d, m),
        (R2, Forward) => r2_remove(ctx.d, m),
        (R2, Backward) => r2_add(ctx, m),
        (R3, Forward) => r3(ctx.d, m),
        _ => Err(na("unknown direction")),
    }
}

fn r1_remove(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (c, q) = crossing_port(d, m.site.end(0)?).ok_or_else(|| na("R1 site is not a crossing"))?;
    if d.link(p4(c, q)) != p4(c, q + 1) {
        return Err(na("no curl at site"));
    }
    let mut ed = Editor::new(d.clone());
    splice(&mut ed, &[c]);
    Ok(ed.finish())
}

fn r1_add(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let mut ed = Editor::new(d.clone());
    let over = over_of(m.variant >> 1 & 1);
    let c = ed.add_node(NodeKind::Crossing(over), 4);
    if m.variant >= 4 {
        if d.free_loops() == 0 {
            return Err(na("no free loop"));
        }
        ed.d.free_loops -= 1;
        ed.connect(p4(c, 0), p4(c, 1));
        ed.connect(p4(c, 2), p4(c, 3));
        return Ok(ed.finish());
    }
    let e1 = m.site.end(0)?;
    let e2 = d.link(e1);
    if e2 == End::Open {
        return Err(na("open arc"));
    }
    ed.connect(e1, p4(c, 0));
    if m.variant & 1 == 0 {
        ed.connect(p4(c, 1), e2);
        ed.connect(p4(c, 2), p4(c, 3));
    } else {
        ed.connect(p4(c, 3), e2);
        ed.connect(p4(c, 1), p4(c, 2));
    }
    Ok(ed.finish())
}

fn r2_remove(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (a, i) = crossing_port(d, m.site.end(0)?).ok_or_else(|| na("R2 site is not a crossing"))?;
    let (b, j) = crossing_port(d, d.link(p4(a, i))).ok_or_else(|| na("no bigon"))?;
    if a == b || d.link(p4(a, i + 1)) != p4(b, j + 3) {
        return Err(na("no bigon"));
    }
    if is_over(d, a, i) != is_over(d, b, j) {
        return Err(na("bigon strands alternate"));
    }
    // A strand may close through the bigon (it becomes a free loop); any
    // other return into the bigon is refused.
    let closing = [
        (p4(a, i + 2), p4(b, j + 2)),
        (p4(b, j + 2), p4(a, i + 2)),
        (p4(a, i + 3), p4(b, j + 1)),
        (p4(b, j + 1), p4(a, i + 3)),
    ];
    if closing
        .iter()
        .any(|&(e, partner)| on_nodes(d.link(e), &[a, b]) && d.link(e) != partner)
    {
        return Err(na("bigon closes on itself"));
    }
    let mut ed = Editor::new(d.clone());
    splice(&mut ed, &[a, b]);
    Ok(ed.finish())
}

fn r2_add(ctx: &Ctx, m: &MoveApplication) -> Result<SquareDiagram> {
    let d = ctx.d;
    if m.variant >= 2 {
        return r2_add_loops(d, m);
    }
    let (a1, a2) = (m.site.end(0)?, m.site.end(1)?);
    let (b1, b2) = (d.link(a1), d.link(a2));
    let f1 = ctx.face_of(a1).ok_or_else(|| na("bad end"))?;
    let arcs = ctx.face_arcs(f1);
    if !arcs.contains(&a1) || !arcs.contains(&a2) {
        return Err(na("arcs do not share a face"));
    }
    if a1 == a2 || a1 == b2 {
        return Err(na("an arc cannot pass itself"));
    }
    let over = over_of(m.variant & 1);
    let mut ed = Editor::new(d.clone());
    let c = ed.add_node(NodeKind::Crossing(over), 4);
    let e = ed.add_node(NodeKind::Crossing(over), 4);
    ed.connect(p4(c, 0), p4(e, 2));
    ed.connect(p4(c, 3), p4(e, 3));
    ed.connect(p4(c, 1), b2);
    ed.connect(p4(c, 2), a1);
    ed.connect(p4(e, 0), b1);
    ed.connect(p4(e, 1), a2);
    Ok(ed.finish())
}

/// The bigon of `r2_add` with one or both strands closed into loops.
fn r2_add_loops(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let loops = if m.variant < 4 { 2 } else { 1 };
    if d.free_loops() < loops {
        return Err(na("not enough free loops"));
    }
    let over = over_of(m.variant & 1);
    let mut ed = Editor::new(d.clone());
    ed.d.free_loops -= loops;
    let c = ed.add_node(NodeKind::Crossing(over), 4);
    let e = ed.add_node(NodeKind::Crossing(over), 4);
    ed.connect(p4(c, 0), p4(e, 2));
    ed.connect(p4(c, 3), p4(e, 3));
    let (close1, close2) = match (loops, m.variant >> 1 & 1) {
        (2, _) => (true, true),
        (_, 0) => (true, false),
        _ => (false, true),
    };
    let (a1, b1) = if close1 {
        (None, None)
    } else {
        let a = m.site.end(0)?;
        (Some(a), Some(d.link(a)))
    };
    let (a2, b2) = if close2 {
        (None, None)
    } else {
        let a = m.site.end(0)?;
        (Some(a), Some(d.link(a)))
    };
    if [b1, b2].contains(&Some(End::Open)) {
        return Err(na("open arc"));
    }
    match (a1, b1) {
        (Some(a1), Some(b1)) => {
            ed.connect(p4(c, 2), a1);
            ed.connect(p4(e, 0), b1);
        }
        _ => ed.connect(p4(c, 2), p4(e, 0)),
    }
    match (a2, b2) {
        (Some(a2), Some(b2)) => {
            ed.connect(p4(e, 1), a2);
            ed.connect(p4(c, 1), b2);
        }
        _ => ed.connect(p4(e, 1), p4(c, 1)),
    }
    Ok(ed.finish())
}

/// Triangle face `c.p -> x1 -> x2 -> c` of three distinct crossings, with
/// one strand over both of its triangle crossings. Returns the three
/// `(crossing, leaving port)` corners.
fn triangle(d: &SquareDiagram, c: NodeId, p: u8) -> Option<[(NodeId, u8); 3]> {
    let mut corners = [(c, p); 3];
    let mut arrive = [0u8; 3];
    for k in 0..3 {
        let (n, q) = corners[k];
        let (m, r) = crossing_port(d, d.link(p4(n, q)))?;
        arrive[(k + 1) % 3] = r;
        if k < 2 {
            corners[k + 1] = (m, (r + 3) % 4);
        } else if (m, r) != (c, (p + 1) % 4) {
            return None;
        }
    }
    let [x, y, z] = corners.map(|(n, _)| n);
    if x == y || y == z || x == z {
        return None;
    }
    let top = (0..3).any(|k| {
        let (n, q) = corners[k];
        let (m, _) = corners[(k + 1) % 3];
        is_over(d, n, q) && is_over(d, m, arrive[(k + 1) % 3])
    });
    top.then_some(corners)
}

fn r3(d: &SquareDiagram, m: &MoveApplication) -> Result<SquareDiagram> {
    let (c, p) = crossing_port(d, m.site.end(0)?).ok_or_else(|| na("R3 site is not a crossing"))?;
    let t = triangle(d, c, p).ok_or_else(|| na("no R3 triangle"))?;
    let nodes = t.map(|(n, _)| n);
    let mut links = Vec::with_capacity(9);
    for &(a, a_out) in &t {
        let a_in = (a_out + 2) % 4;
        let (b, b_in) = crossing_port(d, d.link(p4(a, a_out))).expect("triangle side");
        let b_out = (b_in + 2) % 4;
        let x_a = d.link(p4(a, a_in));
        let x_b = d.link(p4(b, b_out));
        if on_nodes(x_a, &nodes) || on_nodes(x_b, &nodes) {
            return Err(na("triangle strands close up"));
        }
        // The strand now meets b before a, crossing each the same way.
        links.push((x_a, p4(b, b_in)));
        links.push((p4(b, b_out), p4(a, a_in)));
        links.push((p4(a, a_out), x_b));
    }
    let mut ed = Editor::new(d.clone());
    for (x, y) in links {
        ed.connect(x, y);
    }
    Ok(ed.finish())
}

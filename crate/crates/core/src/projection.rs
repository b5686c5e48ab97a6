//! From a periodic embedding to a tridiagram.
//!
//! Every edge is a polyline. It is cut where it meets the faces of the unit
//! cube and each piece is moved back into the cube. Projecting along an
//! axis `A`, with `(h, v)` the in-plane coordinates of [`Axis::plane`]:
//!
//! * meeting a face perpendicular to `A` gives a marker; the front face is
//!   `x_A = 1`, so the dot faces the part of the strand that reaches it;
//! * meeting a face perpendicular to `h` (or `v`) gives a left/right (or
//!   bottom/top) puncture pair at the same height;
//! * two projected segments meeting gives a crossing; the point with the
//!   larger `x_A` is in front and goes over.
//!
//! Net vertices of degree two are dissolved into their strand, and
//! isolated vertices are dropped.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Axis, Editor, End, NodeId, NodeKind, OverPair, Side, SquareDiagram};
use crate::net::PeriodicEmbedding;
use crate::tridiagram::{check_tridiagram, Tridiagram};
use crate::validate::validate_diagram;
use crate::{Error, Result};

pub const DEFAULT_EPS: f64 = 1e-3;
pub const DEFAULT_TRIES: u32 = 64;
/// Positions closer than this are treated as coincident.
const NEAR: f64 = 1e-7;
/// Depths closer than this at a crossing are a tie.
const TIE: f64 = 1e-9;
/// Minimum sine of the angle between two curves meeting at a point.
const MIN_SIN: f64 = 1e-6;

/// A broken projection rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// `None` for problems in 3-space that no projection can avoid.
    pub axis: Option<Axis>,
    pub rule: u8,
    pub detail: String,
}

impl Violation {
    fn new(axis: Option<Axis>, rule: u8, detail: impl Into<String>) -> Self {
        Violation {
            axis,
            rule,
            detail: detail.into(),
        }
    }

    fn into_error(self, tries: u32) -> Error {
        Error::Genericity {
            tries,
            rule: self.rule,
            detail: match self.axis {
                Some(a) => format!("axis {a}: {}", self.detail),
                None => self.detail,
            },
        }
    }
}

type P3 = [f64; 3];
type P2 = [f64; 2];

/// An edge cut at the cube faces. `faces[k]` separates `pieces[k]` and
/// `pieces[k + 1]`: the axis crossed and the direction (+1 leaving through
/// the face at 1).
struct Chain {
    a: usize,
    b: usize,
    pieces: Vec<Vec<P3>>,
    faces: Vec<(usize, i8)>,
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < NEAR
}

fn unfold(e: &PeriodicEmbedding) -> std::result::Result<Vec<Chain>, Violation> {
    for v in &e.vertices {
        if v.pos.iter().any(|&x| near_integer(x)) {
            return Err(Violation::new(
                None,
                9,
                format!("vertex {} lies on a cell face", v.label),
            ));
        }
    }
    let mut chains = Vec::with_capacity(e.edges.len());
    for (i, edge) in e.edges.iter().enumerate() {
        let line = e.polyline(i);
        for p in &line[1..line.len() - 1] {
            if p.iter().any(|&x| near_integer(x)) {
                return Err(Violation::new(
                    None,
                    4,
                    format!("edge {i} bends on a cell face"),
                ));
            }
        }
        let mut cell = [0i64; 3];
        let reduce = |p: P3, cell: [i64; 3]| [0, 1, 2].map(|k| p[k] - cell[k] as f64);
        let mut pieces = vec![vec![line[0]]];
        let mut faces = Vec::new();
        for w in line.windows(2) {
            let (p, q) = (w[0], w[1]);
            let mut hits: Vec<(f64, usize, i8)> = Vec::new();
            for k in 0..3 {
                let (lo, hi) = (p[k].min(q[k]), p[k].max(q[k]));
                let mut n = lo.floor() + 1.0;
                while n < hi {
                    let t = (n - p[k]) / (q[k] - p[k]);
                    hits.push((t, k, if q[k] > p[k] { 1 } else { -1 }));
                    n += 1.0;
                }
            }
            hits.sort_by(|x, y| x.0.total_cmp(&y.0));
            let len: f64 = (0..3).map(|k| (q[k] - p[k]).powi(2)).sum::<f64>().sqrt();
            for pair in hits.windows(2) {
                if (pair[1].0 - pair[0].0) * len < NEAR {
                    return Err(Violation::new(
                        None,
                        6,
                        format!("edge {i} passes through a cell edge"),
                    ));
                }
            }
            for (t, k, dir) in hits {
                let mut at = [0, 1, 2].map(|j| p[j] + t * (q[j] - p[j]));
                let mut here = reduce(at, cell);
                here[k] = if dir > 0 { 1.0 } else { 0.0 };
                pieces.last_mut().expect("piece").push(here);
                faces.push((k, dir));
                cell[k] += dir as i64;
                at = reduce(at, cell);
                at[k] = if dir > 0 { 0.0 } else { 1.0 };
                pieces.push(vec![at]);
            }
            pieces.last_mut().expect("piece").push(reduce(q, cell));
        }
        chains.push(Chain {
            a: edge.a,
            b: edge.b,
            pieces,
            faces,
        });
    }
    Ok(chains)
}

/// Identity of a segment end point, to recognise legitimate contacts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pt {
    Vertex(usize),
    Bend(usize, usize),
    /// Face event `k` of chain `c`.
    Face(usize, usize),
}

struct Seg {
    chain: usize,
    piece: usize,
    idx: usize,
    p: P2,
    q: P2,
    dp: f64,
    dq: f64,
    ends: [Pt; 2],
}

struct PieceRef {
    chain: usize,
    k: usize,
}

struct Crossing {
    at: P2,
    /// `(segment, parameter, depth)` of both strands.
    s: [(usize, f64, f64); 2],
}

struct Layout {
    pieces: Vec<PieceRef>,
    segs: Vec<Seg>,
    crossings: Vec<Crossing>,
}

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: P2) -> f64 {
    dot(a, a).sqrt()
}

fn angle(a: P2) -> f64 {
    a[1].atan2(a[0]).rem_euclid(TAU)
}

fn on_frame(p: P2) -> bool {
    p.iter().any(|&x| x.abs() < NEAR || (1.0 - x).abs() < NEAR)
}

fn rule_for(pt: Pt, axis: usize, chains: &[Chain]) -> (u8, &'static str) {
    match pt {
        Pt::Vertex(_) => (8, "a vertex projects onto another curve"),
        Pt::Bend(..) => (2, "curves meet at a bend"),
        Pt::Face(c, k) if chains[c].faces[k].0 == axis => (3, "a marker lies on another curve"),
        Pt::Face(..) => (5, "curves meet on the square's edge"),
    }
}

fn layout(chains: &[Chain], axis: Axis) -> std::result::Result<Layout, Violation> {
    let a = axis.index();
    let (h, v) = axis.plane();
    let bad = |rule: u8, detail: String| Violation::new(Some(axis), rule, detail);
    let mut pieces = Vec::new();
    let mut segs = Vec::new();
    for (c, ch) in chains.iter().enumerate() {
        for (k, pts) in ch.pieces.iter().enumerate() {
            let piece = pieces.len();
            pieces.push(PieceRef { chain: c, k });
            let first = if k == 0 {
                Pt::Vertex(ch.a)
            } else {
                Pt::Face(c, k - 1)
            };
            let last = if k + 1 == ch.pieces.len() {
                Pt::Vertex(ch.b)
            } else {
                Pt::Face(c, k)
            };
            for idx in 0..pts.len() - 1 {
                let (p3, q3) = (pts[idx], pts[idx + 1]);
                let seg = Seg {
                    chain: c,
                    piece,
                    idx,
                    p: [p3[h], p3[v]],
                    q: [q3[h], q3[v]],
                    dp: p3[a],
                    dq: q3[a],
                    ends: [
                        if idx == 0 {
                            first
                        } else {
                            Pt::Bend(piece, idx)
                        },
                        if idx + 2 == pts.len() {
                            last
                        } else {
                            Pt::Bend(piece, idx + 1)
                        },
                    ],
                };
                if norm(sub(seg.q, seg.p)) < NEAR {
                    return Err(bad(1, format!("edge {c} runs along the projection axis")));
                }
                segs.push(seg);
            }
        }
        for (k, &(fa, _)) in ch.faces.iter().enumerate() {
            let p = *ch.pieces[k].last().expect("piece");
            if fa == a && on_frame([p[h], p[v]]) {
                return Err(bad(
                    7,
                    format!("edge {c} has a marker on the square's edge"),
                ));
            }
        }
    }

    let mut crossings = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if let Some(x) =
                meet(&segs[i], &segs[j], i, j, a, chains).map_err(|(r, s)| bad(r, s))?
            {
                crossings.push(x);
            }
        }
    }
    for (i, x) in crossings.iter().enumerate() {
        if on_frame(x.at) {
            return Err(bad(5, "double point on the square's edge".into()));
        }
        if crossings[i + 1..]
            .iter()
            .any(|y| norm(sub(x.at, y.at)) < NEAR)
        {
            return Err(bad(1, "triple point".into()));
        }
    }

    // Boundary positions must be distinct along each edge pair.
    let mut lr: Vec<f64> = Vec::new();
    let mut bt: Vec<f64> = Vec::new();
    for ch in chains {
        for (k, &(fa, _)) in ch.faces.iter().enumerate() {
            let p = *ch.pieces[k].last().expect("piece");
            if fa == h {
                lr.push(p[v]);
            } else if fa == v {
                bt.push(p[h]);
            }
        }
    }
    for list in [&mut lr, &mut bt] {
        list.sort_by(f64::total_cmp);
        if list.windows(2).any(|w| w[1] - w[0] < NEAR) {
            return Err(bad(
                5,
                "two curves meet the square's edge at one point".into(),
            ));
        }
    }

    let lay = Layout {
        pieces,
        segs,
        crossings,
    };
    for (vx, dirs) in vertex_ends(chains, &lay).iter().enumerate() {
        let mut angles: Vec<f64> = dirs.iter().map(|&(_, d)| angle(d)).collect();
        angles.sort_by(f64::total_cmp);
        let n = angles.len();
        for k in 0..n {
            let gap = (angles[(k + 1) % n] - angles[k]).rem_euclid(TAU);
            if n > 1 && (gap < MIN_SIN || (n == 2 && (gap - TAU).abs() < MIN_SIN)) {
                return Err(bad(
                    2,
                    format!("two edges leave vertex {vx} in the same direction"),
                ));
            }
        }
    }
    Ok(lay)
}

/// Where two segments meet: `Ok(None)` for nothing or an expected contact,
/// `Ok(Some)` for a crossing, `Err((rule, detail))` for a violation.
fn meet(
    s1: &Seg,
    s2: &Seg,
    i: usize,
    j: usize,
    a: usize,
    chains: &[Chain],
) -> std::result::Result<Option<Crossing>, (u8, String)> {
    let r = sub(s1.q, s1.p);
    let s = sub(s2.q, s2.p);
    let (lr, ls) = (norm(r), norm(s));
    let (tu, tw) = (NEAR / lr, NEAR / ls);
    let shared = |u: f64, w: f64| {
        (0..2).any(|e1| {
            (0..2).any(|e2| {
                s1.ends[e1] == s2.ends[e2]
                    && (u - e1 as f64).abs() < tu
                    && (w - e2 as f64).abs() < tw
            })
        })
    };
    let contact = |u: f64, w: f64| -> (u8, String) {
        let pt = if u < tu {
            s1.ends[0]
        } else if u > 1.0 - tu {
            s1.ends[1]
        } else if w < tw {
            s2.ends[0]
        } else {
            s2.ends[1]
        };
        let (rule, what) = rule_for(pt, a, chains);
        (rule, what.to_string())
    };
    let denom = cross(r, s);
    let d0 = sub(s2.p, s1.p);
    if denom.abs() <= MIN_SIN * lr * ls {
        if cross(d0, r).abs() > NEAR * lr {
            return Ok(None);
        }
        let b0 = dot(d0, r) / (lr * lr);
        let b1 = dot(sub(s2.q, s1.p), r) / (lr * lr);
        let (lo, hi) = (b0.min(b1).max(0.0), b0.max(b1).min(1.0));
        if hi < lo - tu {
            return Ok(None);
        }
        if (hi - lo) * lr > NEAR {
            return Err((
                1,
                format!("edges {} and {} overlap in projection", s1.chain, s2.chain),
            ));
        }
        let u = lo;
        let w = if (b0 - u).abs() < (b1 - u).abs() {
            0.0
        } else {
            1.0
        };
        return if shared(u, w) {
            Ok(None)
        } else {
            Err(contact(u, w))
        };
    }
    let u = cross(d0, s) / denom;
    let w = cross(d0, r) / denom;
    if u < -tu || u > 1.0 + tu || w < -tw || w > 1.0 + tw {
        return Ok(None);
    }
    let interior = u > tu && u < 1.0 - tu && w > tw && w < 1.0 - tw;
    if !interior {
        return if shared(u, w) {
            Ok(None)
        } else {
            Err(contact(u, w))
        };
    }
    let d1 = s1.dp + u * (s1.dq - s1.dp);
    let d2 = s2.dp + w * (s2.dq - s2.dp);
    if (d1 - d2).abs() < TIE {
        return Err((1, "two edges meet in space".into()));
    }
    if denom.abs() < MIN_SIN * lr * ls {
        return Err((2, "tangent double point".into()));
    }
    Ok(Some(Crossing {
        at: [s1.p[0] + u * r[0], s1.p[1] + u * r[1]],
        s: [(i, u, d1), (j, w, d2)],
    }))
}

/// For each net vertex, `((chain, end), outgoing direction)` of every
/// incident edge end; end 0 is the start of the chain.
fn vertex_ends(chains: &[Chain], lay: &Layout) -> Vec<Vec<((usize, usize), P2)>> {
    let nv = chains.iter().map(|c| c.a.max(c.b) + 1).max().unwrap_or(0);
    let mut out = vec![Vec::new(); nv];
    let mut first = vec![usize::MAX; chains.len()];
    let mut last = vec![0; chains.len()];
    for (k, s) in lay.segs.iter().enumerate() {
        let c = lay.pieces[s.piece].chain;
        first[c] = first[c].min(k);
        last[c] = last[c].max(k);
    }
    for (c, ch) in chains.iter().enumerate() {
        let (f, l) = (&lay.segs[first[c]], &lay.segs[last[c]]);
        out[ch.a].push(((c, 0), sub(f.q, f.p)));
        out[ch.b].push(((c, 1), sub(l.p, l.q)));
    }
    out
}

/// Checks every projection rule along every axis.
pub fn violations(e: &PeriodicEmbedding) -> Vec<Violation> {
    let chains = match unfold(e) {
        Ok(c) => c,
        Err(v) => return vec![v],
    };
    Axis::ALL
        .into_iter()
        .filter_map(|axis| layout(&chains, axis).err())
        .collect()
}

pub fn is_generic(e: &PeriodicEmbedding) -> bool {
    violations(e).is_empty()
}

/// Edges that no vertex move can make generic get two interior points to
/// jitter: those whose projection along some axis collapses to a point, and
/// the second of two edges joining the same vertices with offsets that
/// differ along a single axis (their projections along it coincide).
fn with_bends(e: &PeriodicEmbedding) -> PeriodicEmbedding {
    let mut out = e.clone();
    let twin = |i: usize| {
        let x = &e.edges[i];
        e.edges[..i].iter().any(|y| {
            let same = (y.a, y.b) == (x.a, x.b);
            let flip = (y.a, y.b) == (x.b, x.a);
            [(same, 1), (flip, -1)].into_iter().any(|(ok, sign)| {
                ok && (0..3)
                    .filter(|&k| x.offset[k] != sign * y.offset[k])
                    .count()
                    <= 1
            })
        })
    };
    for i in 0..out.edges.len() {
        if !out.edges[i].via.is_empty() {
            continue;
        }
        let line = e.polyline(i);
        let (p, q) = (line[0], line[1]);
        let degenerate = Axis::ALL.into_iter().any(|ax| {
            let (h, v) = ax.plane();
            (p[h] - q[h]).abs() < NEAR && (p[v] - q[v]).abs() < NEAR
        });
        if degenerate || twin(i) {
            out.edges[i].via = [1.0 / 3.0, 2.0 / 3.0]
                .into_iter()
                .map(|t| [0, 1, 2].map(|k| p[k] + t * (q[k] - p[k])))
                .collect();
        }
    }
    out
}

fn jitter(e: &PeriodicEmbedding, rng: &mut ChaCha8Rng, eps: f64) -> PeriodicEmbedding {
    let mut out = e.clone();
    let mut shift = Vec::with_capacity(out.vertices.len());
    for v in &mut out.vertices {
        let mut k = [0i64; 3];
        for (i, x) in v.pos.iter_mut().enumerate() {
            *x += rng.random_range(-eps..=eps);
            k[i] = x.floor() as i64;
            *x -= k[i] as f64;
        }
        shift.push(k);
    }
    for edge in &mut out.edges {
        let (ka, kb) = (shift[edge.a], shift[edge.b]);
        for i in 0..3 {
            edge.offset[i] += kb[i] - ka[i];
        }
        for p in &mut edge.via {
            for (i, x) in p.iter_mut().enumerate() {
                *x += rng.random_range(-eps..=eps) - ka[i] as f64;
            }
        }
    }
    out
}

/// Jitters vertices and interior points by at most `eps` until every
/// projection is regular. Generic input is returned unchanged.
pub fn perturb_generic(
    e: &PeriodicEmbedding,
    seed: u64,
    eps: f64,
    max_tries: u32,
) -> Result<PeriodicEmbedding> {
    let mut first = match violations(e).into_iter().next() {
        None => return Ok(e.clone()),
        Some(v) => v,
    };
    let base = with_bends(e);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_tries {
        let cand = jitter(&base, &mut rng, eps);
        match violations(&cand).into_iter().next() {
            None => return Ok(cand),
            Some(v) => first = v,
        }
    }
    Err(first.into_error(max_tries))
}

/// The diagram of `e` projected along `axis`.
pub fn project(e: &PeriodicEmbedding, axis: Axis) -> Result<SquareDiagram> {
    let chains = unfold(e).map_err(|v| v.into_error(0))?;
    let lay = layout(&chains, axis).map_err(|v| v.into_error(0))?;
    let d = build(e, &chains, &lay, axis);
    let rep = validate_diagram(&d);
    if !rep.is_valid() {
        return Err(Error::Structure(format!(
            "projection along axis {axis} is invalid: {rep:?}"
        )));
    }
    Ok(d)
}

fn build(e: &PeriodicEmbedding, chains: &[Chain], lay: &Layout, axis: Axis) -> SquareDiagram {
    let a = axis.index();
    let (h, v) = axis.plane();
    let mut ed = Editor::new(SquareDiagram::new());
    ed.d.axis = Some(axis);

    // Vertices, ports sorted counter-clockwise.
    let mut vport = vec![[End::Open; 2]; chains.len()];
    let mut vnode = vec![None; e.vertices.len()];
    for (vx, mut ends) in vertex_ends(chains, lay).into_iter().enumerate() {
        if ends.is_empty() {
            continue;
        }
        ends.sort_by(|x, y| angle(x.1).total_cmp(&angle(y.1)));
        let n = ed.add_node(
            NodeKind::Vertex(Some(e.vertices[vx].label.clone())),
            ends.len(),
        );
        vnode[vx] = Some(n);
        for (p, ((c, end), _)) in ends.into_iter().enumerate() {
            vport[c][end] = End::Port(n, p as u8);
        }
    }

    // Face events: (arrive, leave) ends for every chain and face index.
    let mut face_ends: Vec<Vec<(End, End)>> = chains
        .iter()
        .map(|c| vec![(End::Open, End::Open); c.faces.len()])
        .collect();
    let mut lr = Vec::new();
    let mut bt = Vec::new();
    for (c, ch) in chains.iter().enumerate() {
        for (k, &(fa, dir)) in ch.faces.iter().enumerate() {
            let p = *ch.pieces[k].last().expect("piece");
            if fa == a {
                let m = ed.add_node(NodeKind::Marker, 2);
                let (before, after) = if dir > 0 { (0, 1) } else { (1, 0) };
                face_ends[c][k] = (End::Port(m, before), End::Port(m, after));
            } else if fa == h {
                lr.push((p[v], c, k, dir));
            } else {
                bt.push((p[h], c, k, dir));
            }
        }
    }
    for (list, plus, minus) in [(&mut lr, Side::R, Side::L), (&mut bt, Side::T, Side::B)] {
        list.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (slot, &(_, c, k, dir)) in list.iter().enumerate() {
            let (exit, enter) = if dir > 0 {
                (plus, minus)
            } else {
                (minus, plus)
            };
            let x = ed.add_puncture(exit, slot as u32);
            let y = ed.add_puncture(enter, slot as u32);
            face_ends[c][k] = (x, y);
        }
    }

    // Crossings, ports sorted counter-clockwise.
    let mut stations: Vec<Vec<(usize, f64, End, End)>> = vec![Vec::new(); lay.pieces.len()];
    for x in &lay.crossings {
        let mut ports: Vec<(f64, usize, bool)> = Vec::with_capacity(4);
        for (t, &(si, _, _)) in x.s.iter().enumerate() {
            let s = &lay.segs[si];
            let d = sub(s.q, s.p);
            ports.push((angle([-d[0], -d[1]]), t, false));
            ports.push((angle(d), t, true));
        }
        ports.sort_by(|p, q| p.0.total_cmp(&q.0));
        let top = if x.s[0].2 > x.s[1].2 { 0 } else { 1 };
        let over_port = ports.iter().position(|p| p.1 == top).expect("port") as u8;
        let n = ed.add_node(NodeKind::Crossing(OverPair::of_port(over_port)), 4);
        for (t, &(si, u, _)) in x.s.iter().enumerate() {
            let port_of = |out: bool| {
                ports
                    .iter()
                    .position(|p| p.1 == t && p.2 == out)
                    .expect("port") as u8
            };
            let s = &lay.segs[si];
            stations[s.piece].push((
                s.idx,
                u,
                End::Port(n, port_of(false)),
                End::Port(n, port_of(true)),
            ));
        }
    }

    for (pi, pr) in lay.pieces.iter().enumerate() {
        let ch = &chains[pr.chain];
        let start = if pr.k == 0 {
            vport[pr.chain][0]
        } else {
            face_ends[pr.chain][pr.k - 1].1
        };
        let end = if pr.k + 1 == ch.pieces.len() {
            vport[pr.chain][1]
        } else {
            face_ends[pr.chain][pr.k].0
        };
        let st = &mut stations[pi];
        st.sort_by(|x, y| (x.0, x.1).partial_cmp(&(y.0, y.1)).expect("finite"));
        let mut prev = start;
        for &(_, _, arrive, leave) in st.iter() {
            ed.connect(prev, arrive);
            prev = leave;
        }
        ed.connect(prev, end);
    }

    for n in vnode.into_iter().flatten() {
        dissolve(&mut ed, n);
    }
    ed.finish()
}

fn dissolve(ed: &mut Editor, n: NodeId) {
    if ed.d.node(n).arity() != 2 {
        return;
    }
    let (x, y) = (ed.link(End::Port(n, 0)), ed.link(End::Port(n, 1)));
    ed.remove_node(n);
    if x == End::Port(n, 1) {
        ed.d.free_loops += 1;
    } else {
        ed.connect(x, y);
    }
}

/// Projections along the three axes of a generic embedding.
pub fn tridiagram_of(e: &PeriodicEmbedding) -> Result<Tridiagram> {
    let [a, b, c] = crate::parallel::map3(|axis| project(e, axis));
    let t = Tridiagram::new([a?, b?, c?]);
    let rep = check_tridiagram(&t);
    if !rep.consistent {
        return Err(Error::Structure(format!(
            "inconsistent tridiagram: {:?}",
            rep.counters
        )));
    }
    Ok(t)
}

/// Perturbation with the default parameters, then projection.
pub fn tridiagram_from_net(e: &PeriodicEmbedding, seed: u64) -> Result<Tridiagram> {
    tridiagram_of(&perturb_generic(e, seed, DEFAULT_EPS, DEFAULT_TRIES)?)
}

/// Number of times the edges of `e` cross the faces perpendicular to
/// `axis`, counted in 3-space.
pub fn face_crossings(e: &PeriodicEmbedding, axis: Axis) -> usize {
    let k = axis.index();
    (0..e.edges.len())
        .map(|i| {
            e.polyline(i)
                .windows(2)
                .map(|w| {
                    let (lo, hi) = (w[0][k].min(w[1][k]), w[0][k].max(w[1][k]));
                    (hi.ceil() - lo.floor() - 1.0).max(0.0) as usize
                })
                .sum::<usize>()
        })
        .sum()
}

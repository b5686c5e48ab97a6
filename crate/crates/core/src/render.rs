//! SVG drawings of square diagrams.
//!
//! Layout: the planar map (frame included) is subdivided, each edge into
//! three segments and each face into a fan around a centre point, giving a
//! triangulation. Frame vertices are pinned to the square and every other
//! point is placed at the average of its neighbours (a Tutte embedding),
//! solved by a fixed sequence of relaxation sweeps. Components that float
//! inside the square are laid out the same way inside a small disc. The
//! layout only affects pictures.
//!
//! Drawing conventions: under-strands are broken at crossings, markers are
//! a filled dot (front face) joined to an open circle (back face), graph
//! vertices are filled squares and punctures are ticks on the frame.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::code::canonical_code;
use crate::diagram::{End, NodeKind, Side, SquareDiagram};
use crate::map::{FrameVertex, PlanarMap};
use crate::tridiagram::Tridiagram;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderStyle {
    /// Side of the square canvas, in pixels.
    pub size: f64,
    pub margin: f64,
    pub stroke: f64,
    pub frame_stroke: f64,
    /// Length of the break in an under-strand on each side of a crossing.
    pub gap: f64,
    pub dot_radius: f64,
    pub circle_radius: f64,
    pub vertex_size: f64,
    pub tick: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            size: 400.0,
            margin: 20.0,
            stroke: 2.0,
            frame_stroke: 1.5,
            gap: 7.0,
            dot_radius: 4.0,
            circle_radius: 4.5,
            vertex_size: 8.0,
            tick: 6.0,
        }
    }
}

impl RenderStyle {
    pub fn check(&self) -> Result<()> {
        let all = [
            self.size,
            self.stroke,
            self.frame_stroke,
            self.gap,
            self.dot_radius,
            self.circle_radius,
            self.vertex_size,
            self.tick,
        ];
        if all.iter().all(|x| x.is_finite() && *x > 0.0)
            && self.margin >= 0.0
            && 2.0 * self.margin < self.size
        {
            Ok(())
        } else {
            Err(Error::Structure(
                "render style needs positive dimensions".into(),
            ))
        }
    }
}

type P = [f64; 2];

fn lerp(a: P, b: P, t: f64) -> P {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

fn dist(a: P, b: P) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Points of the subdivision: map vertices, then one per dart (the edge
/// point nearest the dart's vertex), then one per face.
struct Subdivision {
    edge_base: usize,
    face_base: usize,
    adj: Vec<Vec<usize>>,
    pos: Vec<P>,
    fixed: Vec<bool>,
    /// Centres of outer faces, which take no part in the layout.
    excluded: Vec<bool>,
}

impl Subdivision {
    fn new(map: &PlanarMap) -> Self {
        let nv = map.vertex_count();
        let edge_base = nv;
        let face_base = nv + map.dart_count();
        let n = face_base + map.faces.len();
        let mut adj = vec![Vec::new(); n];
        let mut join = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for d in 0..map.dart_count() {
            let e = map.link[d];
            if d < e {
                let (e1, e2) = (edge_base + d, edge_base + e);
                join(map.vertex_of[d], e1);
                join(e1, e2);
                join(e2, map.vertex_of[e]);
                for f in [map.face_of[d], map.face_of[e]] {
                    join(e1, face_base + f);
                    join(e2, face_base + f);
                }
            }
            join(map.vertex_of[d], face_base + map.face_of[d]);
        }
        Subdivision {
            edge_base,
            face_base,
            adj,
            pos: vec![[0.0, 0.0]; n],
            fixed: vec![false; n],
            excluded: vec![false; n],
        }
    }

    fn near(&self, d: usize) -> usize {
        self.edge_base + d
    }

    fn pin(&mut self, i: usize, p: P) {
        self.pos[i] = p;
        self.fixed[i] = true;
    }

    /// Points around a face, in tracing order.
    fn boundary(&self, map: &PlanarMap, face: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &d in &map.faces[face] {
            out.push(map.vertex_of[d]);
            out.push(self.near(d));
            out.push(self.near(map.link[d]));
        }
        out
    }

    fn relax(&mut self, members: &[usize]) {
        const OMEGA: f64 = 1.6;
        let free: Vec<(usize, Vec<usize>)> = members
            .iter()
            .copied()
            .filter(|&i| !self.fixed[i] && !self.excluded[i])
            .map(|i| {
                (
                    i,
                    self.adj[i]
                        .iter()
                        .copied()
                        .filter(|&j| !self.excluded[j])
                        .collect(),
                )
            })
            .collect();
        for _ in 0..20_000 {
            let mut moved: f64 = 0.0;
            for (i, nb) in &free {
                if nb.is_empty() {
                    continue;
                }
                let mut s = [0.0, 0.0];
                for &j in nb {
                    s[0] += self.pos[j][0];
                    s[1] += self.pos[j][1];
                }
                let avg = [s[0] / nb.len() as f64, s[1] / nb.len() as f64];
                let next = lerp(self.pos[*i], avg, OMEGA);
                moved = moved.max(dist(next, self.pos[*i]));
                self.pos[*i] = next;
            }
            if moved < 1e-10 {
                break;
            }
        }
    }
}

/// Layout of a diagram in the unit square, y upwards.
struct Layout {
    map: PlanarMap,
    sub: Subdivision,
    /// Centres and radii of free loops.
    loops: Vec<(P, f64)>,
}

fn slot_position(side: Side, slot: u32, count: usize) -> P {
    let t = (slot as f64 + 1.0) / (count as f64 + 1.0);
    match side {
        Side::B => [t, 0.0],
        Side::T => [t, 1.0],
        Side::L => [0.0, t],
        Side::R => [1.0, t],
    }
}

fn polygon_area(pts: &[P]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

fn layout(d: &SquareDiagram) -> Result<Layout> {
    let map = PlanarMap::build(d).map_err(|e| Error::Structure(format!("{e:?}")))?;
    let mut sub = Subdivision::new(&map);
    let n = map.node_count;
    let comp = map.components();
    let frame_comp = comp[n];
    let (eb, fb, total) = (sub.edge_base, sub.face_base, sub.pos.len());
    let point_comp = |i: usize| -> usize {
        if i < eb {
            comp[i]
        } else if i < fb {
            comp[map.vertex_of[i - eb]]
        } else {
            comp[map.vertex_of[map.faces[i - fb][0]]]
        }
    };
    let members = |c: usize| -> Vec<usize> { (0..total).filter(|&i| point_comp(i) == c).collect() };

    // The frame: vertices pinned to the square, frame edges straight.
    let corners = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    for (i, fv) in map.frame.iter().enumerate() {
        let p = match *fv {
            FrameVertex::Corner(k) => corners[k as usize],
            FrameVertex::Punct(q) => {
                let pu = &d.punctures()[q as usize];
                slot_position(pu.side, pu.slot, d.side_count(pu.side))
            }
        };
        sub.pin(n + i, p);
    }
    for d0 in 0..map.dart_count() {
        let d1 = map.link[d0];
        let (v, w) = (map.vertex_of[d0], map.vertex_of[d1]);
        if v >= n && w >= n && map.end(d0).is_none() && map.end(d1).is_none() {
            let (a, b) = (sub.pos[v], sub.pos[w]);
            sub.pin(eb + d0, lerp(a, b, 1.0 / 3.0));
            sub.pin(eb + d1, lerp(a, b, 2.0 / 3.0));
        }
    }
    let outer = map.face_of[map.offset[n]];
    sub.excluded[sub.face_base + outer] = true;
    let frame_members = members(frame_comp);
    for &i in &frame_members {
        if !sub.fixed[i] {
            sub.pos[i] = [0.5, 0.5];
        }
    }
    sub.relax(&frame_members);

    // Floating components, each in the unit disc for now.
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut floating = Vec::new();
    for c in 0..ncomp {
        if c == frame_comp {
            continue;
        }
        let faces: Vec<usize> = (0..map.faces.len())
            .filter(|&f| comp[map.vertex_of[map.faces[f][0]]] == c)
            .collect();
        let Some(&outer) = faces
            .iter()
            .max_by_key(|&&f| (map.faces[f].len(), std::cmp::Reverse(f)))
        else {
            continue;
        };
        sub.excluded[sub.face_base + outer] = true;
        let ring = sub.boundary(&map, outer);
        let k = ring.len();
        for (j, &i) in ring.iter().enumerate() {
            if !sub.fixed[i] {
                // Clockwise: the component lies to the right of its outer face.
                let a = -2.0 * PI * j as f64 / k as f64;
                sub.pin(i, [a.cos(), a.sin()]);
            }
        }
        let m = members(c);
        sub.relax(&m);
        floating.push(m);
    }

    // Room for floating pieces: the largest inner face of the frame part.
    let items = floating.len() + d.free_loops() as usize;
    let mut loops = Vec::new();
    if items > 0 {
        let host = (0..map.faces.len())
            .filter(|&f| f != outer && comp[map.vertex_of[map.faces[f][0]]] == frame_comp)
            .map(|f| {
                let pts: Vec<P> = sub.boundary(&map, f).iter().map(|&i| sub.pos[i]).collect();
                (polygon_area(&pts).abs(), f, pts)
            })
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        let (centre, room) = match host {
            Some((_, f, pts)) => {
                let c = sub.pos[sub.face_base + f];
                let r = pts
                    .iter()
                    .map(|&p| dist(p, c))
                    .fold(f64::INFINITY, f64::min);
                (c, (0.6 * r).min(0.3))
            }
            None => ([0.5, 0.5], 0.3),
        };
        let r = (room / items as f64).max(0.01);
        let place = |j: usize| -> P {
            [
                centre[0] + (2.0 * j as f64 + 1.0 - items as f64) * r,
                centre[1],
            ]
        };
        for (j, m) in floating.iter().enumerate() {
            let c = place(j);
            for &i in m {
                let p = sub.pos[i];
                sub.pos[i] = [c[0] + 0.8 * r * p[0], c[1] + 0.8 * r * p[1]];
            }
        }
        for j in floating.len()..items {
            loops.push((place(j), 0.6 * r));
        }
    }
    Ok(Layout { map, sub, loops })
}

struct Canvas<'a> {
    style: &'a RenderStyle,
    dx: f64,
}

impl Canvas<'_> {
    fn px(&self, p: P) -> P {
        let s = self.style.size - 2.0 * self.style.margin;
        [
            self.dx + self.style.margin + p[0] * s,
            self.style.margin + (1.0 - p[1]) * s,
        ]
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// Smooth path through the points: straight to the first midpoint, then
/// quadratic pieces through midpoints.
fn path(pts: &[P]) -> String {
    let mut s = format!("M{} {}", num(pts[0][0]), num(pts[0][1]));
    let k = pts.len();
    if k == 2 {
        let _ = write!(s, " L{} {}", num(pts[1][0]), num(pts[1][1]));
        return s;
    }
    let mid = |a: P, b: P| lerp(a, b, 0.5);
    let m = mid(pts[0], pts[1]);
    let _ = write!(s, " L{} {}", num(m[0]), num(m[1]));
    for i in 1..k - 1 {
        let c = pts[i];
        let e = if i + 1 == k - 1 {
            pts[k - 1]
        } else {
            mid(pts[i], pts[i + 1])
        };
        let _ = write!(
            s,
            " Q{} {} {} {}",
            num(c[0]),
            num(c[1]),
            num(e[0]),
            num(e[1])
        );
    }
    s
}

/// Moves `a` towards `b` by `len`, at most 45% of the way.
fn trim(a: P, b: P, len: f64) -> P {
    let l = dist(a, b);
    if l <= 0.0 {
        return a;
    }
    lerp(a, b, (len / l).min(0.45))
}

fn panel(out: &mut String, d: &SquareDiagram, style: &RenderStyle, dx: f64) -> Result<()> {
    let lay = layout(d)?;
    let (map, sub) = (&lay.map, &lay.sub);
    let cv = Canvas { style, dx };
    let n = map.node_count;
    let s = style.size - 2.0 * style.margin;
    let pos = |i: usize| cv.px(sub.pos[i]);

    // Marker glyph centres, pushed apart along their two edges.
    let glyph = |v: usize, port: usize| -> P {
        let c = pos(v);
        let towards = pos(sub.near(map.offset[v] + port));
        trim(c, towards, style.dot_radius + style.circle_radius)
    };

    let _ = writeln!(
        out,
        r##"<rect class="frame" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000" stroke-width="{}"/>"##,
        num(dx + style.margin),
        num(style.margin),
        num(s),
        num(s),
        num(style.frame_stroke)
    );

    let _ = writeln!(
        out,
        r##"<g class="strands" fill="none" stroke="#000" stroke-width="{}" stroke-linecap="round">"##,
        num(style.stroke)
    );
    for d0 in 0..map.dart_count() {
        let d1 = map.link[d0];
        if d1 < d0 || map.is_frame_dart(d0) && map.end(d0).is_none() {
            continue;
        }
        if map.end(d0).is_none() || map.end(d1).is_none() {
            continue;
        }
        let mut pts = vec![
            pos(map.vertex_of[d0]),
            pos(sub.near(d0)),
            pos(sub.near(d1)),
            pos(map.vertex_of[d1]),
        ];
        for (dart, at, next) in [(d0, 0, 1), (d1, 3, 2)] {
            let v = map.vertex_of[dart];
            if v >= n {
                continue;
            }
            let port = map.port_of(dart);
            match &d.nodes()[v].kind {
                NodeKind::Crossing(o) if !o.is_over(port as u8) => {
                    pts[at] = trim(pts[at], pts[next], style.gap)
                }
                NodeKind::Marker => pts[at] = glyph(v, port),
                _ => {}
            }
        }
        let _ = writeln!(out, r#"<path d="{}"/>"#, path(&pts));
    }
    for &(c, r) in &lay.loops {
        let c = cv.px(c);
        let _ = writeln!(
            out,
            r#"<circle class="loop" cx="{}" cy="{}" r="{}"/>"#,
            num(c[0]),
            num(c[1]),
            num(r * s)
        );
    }
    out.push_str("</g>\n");

    out.push_str("<g class=\"punctures\" stroke=\"#000\">\n");
    for (i, pu) in d.punctures().iter().enumerate() {
        let v = map.vertex_of[map.dart(End::Punct(i as u32)).expect("puncture dart")];
        let p = pos(v);
        let t = style.tick / 2.0;
        let (a, b) = if pu.side.is_vertical() {
            ([p[0] - t, p[1]], [p[0] + t, p[1]])
        } else {
            ([p[0], p[1] - t], [p[0], p[1] + t])
        };
        let _ = writeln!(
            out,
            r#"<line class="puncture" data-side="{}" data-slot="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke-width="{}"/>"#,
            pu.side.letter(),
            pu.slot,
            num(a[0]),
            num(a[1]),
            num(b[0]),
            num(b[1]),
            num(style.frame_stroke)
        );
    }
    out.push_str("</g>\n");

    for (v, node) in d.nodes().iter().enumerate() {
        let c = pos(v);
        match &node.kind {
            NodeKind::Marker => {
                let (dot, ring) = (glyph(v, 0), glyph(v, 1));
                let _ = writeln!(
                    out,
                    r##"<g class="marker" data-node="{v}"><circle class="dot" cx="{}" cy="{}" r="{}" fill="#000"/><circle class="ring" cx="{}" cy="{}" r="{}" fill="#fff" stroke="#000" stroke-width="{}"/></g>"##,
                    num(dot[0]),
                    num(dot[1]),
                    num(style.dot_radius),
                    num(ring[0]),
                    num(ring[1]),
                    num(style.circle_radius),
                    num(style.stroke / 2.0)
                );
            }
            NodeKind::Vertex(_) => {
                let h = style.vertex_size / 2.0;
                let _ = writeln!(
                    out,
                    r##"<rect class="vertex" data-node="{v}" x="{}" y="{}" width="{}" height="{}" fill="#000"/>"##,
                    num(c[0] - h),
                    num(c[1] - h),
                    num(style.vertex_size),
                    num(style.vertex_size)
                );
            }
            NodeKind::Crossing(_) => {
                let _ = writeln!(
                    out,
                    r#"<circle class="crossing" data-node="{v}" cx="{}" cy="{}" r="{}" fill="transparent"/>"#,
                    num(c[0]),
                    num(c[1]),
                    num(style.gap * 1.5)
                );
            }
        }
    }
    Ok(())
}

fn open_svg(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
}

/// One diagram as a standalone SVG document.
pub fn render_svg(d: &SquareDiagram, style: &RenderStyle) -> Result<String> {
    style.check()?;
    let mut out = String::new();
    open_svg(&mut out, style.size, style.size);
    let axis = d
        .axis
        .map_or(String::new(), |a| format!(r#" data-axis="{a}""#));
    let _ = writeln!(
        out,
        r#"<g class="diagram"{axis} data-code="{}">"#,
        canonical_code(d)?.to_hex()
    );
    panel(&mut out, d, style, 0.0)?;
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// The three diagrams of a tridiagram side by side, axis 1 on the left.
pub fn render_tridiagram_svg(t: &Tridiagram, style: &RenderStyle) -> Result<String> {
    style.check()?;
    let mut out = String::new();
    open_svg(&mut out, 3.0 * style.size, style.size);
    for (i, d) in t.diagrams.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<g class="diagram" data-axis="{}" data-code="{}">"#,
            i + 1,
            canonical_code(d)?.to_hex()
        );
        panel(&mut out, d, style, i as f64 * style.size)?;
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_diagram;

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!(r#"class="{class}""#)).count()
    }

    #[test]
    fn empty_diagram_is_a_bare_frame() {
        let svg = render_svg(&SquareDiagram::new(), &RenderStyle::default()).unwrap();
        assert_eq!(count(&svg, "frame"), 1);
        assert!(!svg.contains("<path"));
    }

    #[test]
    fn one_marker_gives_one_glyph() {
        let d = parse_diagram("pdg 1\nM 0 a b\nA a b\n").unwrap();
        let svg = render_svg(&d, &RenderStyle::default()).unwrap();
        assert_eq!(
            (
                count(&svg, "marker"),
                count(&svg, "dot"),
                count(&svg, "ring")
            ),
            (1, 1, 1)
        );
        assert_eq!(svg.matches("<path").count(), 1);
    }

    #[test]
    fn crossings_and_punctures_are_drawn() {
        let d = parse_diagram(
            "pdg 1\nP L 0 l\nP R 0 r\nX 0 c0 c1 c2 c3 over=02\nA l c0\nA c1 c2\nA c3 r\nO 1\n",
        )
        .unwrap();
        let svg = render_svg(&d, &RenderStyle::default()).unwrap();
        assert_eq!(
            (
                count(&svg, "crossing"),
                count(&svg, "puncture"),
                count(&svg, "loop")
            ),
            (1, 2, 1)
        );
        assert!(!svg.contains("NaN"));
        assert_eq!(svg, render_svg(&d, &RenderStyle::default()).unwrap());
    }

    #[test]
    fn bad_style_is_refused() {
        let style = RenderStyle {
            gap: 0.0,
            ..RenderStyle::default()
        };
        assert!(render_svg(&SquareDiagram::new(), &style).is_err());
    }
}

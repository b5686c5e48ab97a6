//! Flat planar-map view of a diagram with the square's frame included.
//!
//! Diagram nodes keep their ids as map vertices. The frame contributes one
//! vertex per corner and per puncture, joined in the counter-clockwise
//! order: bottom (left to right), right (upwards), top (right to left),
//! left (downwards). A puncture vertex has ports `[interior, prev, next]`,
//! a corner `[prev, next]`. Faces are traced with the face on the left:
//! arriving at port `q`, leave by port `q - 1`.

use crate::diagram::{End, Side, SquareDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameVertex {
    /// 0 = bottom-left, 1 = bottom-right, 2 = top-right, 3 = top-left.
    Corner(u8),
    Punct(u32),
}

#[derive(Clone, Debug)]
pub struct PlanarMap {
    pub offset: Vec<usize>,
    pub deg: Vec<usize>,
    pub link: Vec<usize>,
    pub vertex_of: Vec<usize>,
    pub node_count: usize,
    pub frame: Vec<FrameVertex>,
    punct_vertex: Vec<usize>,
    pub face_of: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapError {
    OpenPort,
    DuplicateSlot,
}

/// Punctures of the frame in counter-clockwise order, interleaved with corners.
pub fn frame_cycle(d: &SquareDiagram) -> Vec<FrameVertex> {
    let mut by_side: [Vec<(u32, u32)>; 4] = Default::default();
    for (i, p) in d.punctures().iter().enumerate() {
        let k = match p.side {
            Side::B => 0,
            Side::R => 1,
            Side::T => 2,
            Side::L => 3,
        };
        by_side[k].push((p.slot, i as u32));
    }
    let mut out = Vec::with_capacity(d.punctures().len() + 4);
    for (k, side) in by_side.iter_mut().enumerate() {
        side.sort();
        if k >= 2 {
            side.reverse();
        }
        out.push(FrameVertex::Corner(k as u8));
        out.extend(side.iter().map(|&(_, i)| FrameVertex::Punct(i)));
    }
    out
}

impl PlanarMap {
    pub fn build(d: &SquareDiagram) -> Result<PlanarMap, MapError> {
        let n = d.nodes().len();
        let frame = frame_cycle(d);
        let nv = n + frame.len();
        let mut offset = Vec::with_capacity(nv);
        let mut deg = Vec::with_capacity(nv);
        let mut total = 0;
        for node in d.nodes() {
            offset.push(total);
            deg.push(node.arity());
            total += node.arity();
        }
        let mut punct_vertex = vec![usize::MAX; d.punctures().len()];
        for (i, fv) in frame.iter().enumerate() {
            offset.push(total);
            let k = match fv {
                FrameVertex::Corner(_) => 2,
                FrameVertex::Punct(p) => {
                    if punct_vertex[*p as usize] != usize::MAX {
                        return Err(MapError::DuplicateSlot);
                    }
                    punct_vertex[*p as usize] = n + i;
                    3
                }
            };
            deg.push(k);
            total += k;
        }
        let mut vertex_of = vec![0; total];
        for v in 0..nv {
            for p in 0..deg[v] {
                vertex_of[offset[v] + p] = v;
            }
        }
        let mut link = vec![usize::MAX; total];
        let dart_of = |e: End| -> Result<usize, MapError> {
            match e {
                End::Port(node, p) => Ok(offset[node as usize] + p as usize),
                End::Punct(i) => Ok(offset[punct_vertex[i as usize]]),
                End::Open => Err(MapError::OpenPort),
            }
        };
        for (id, node) in d.nodes().iter().enumerate() {
            for (p, &l) in node.links.iter().enumerate() {
                link[offset[id] + p] = dart_of(l)?;
            }
        }
        for (i, p) in d.punctures().iter().enumerate() {
            link[offset[punct_vertex[i]]] = dart_of(p.link)?;
        }
        let m = frame.len();
        for i in 0..m {
            let v = n + i;
            let w = n + (i + 1) % m;
            let next_port = if deg[v] == 2 { 1 } else { 2 };
            let prev_port_w = if deg[w] == 2 { 0 } else { 1 };
            let a = offset[v] + next_port;
            let b = offset[w] + prev_port_w;
            link[a] = b;
            link[b] = a;
        }
        let mut map = PlanarMap {
            offset,
            deg,
            link,
            vertex_of,
            node_count: n,
            frame,
            punct_vertex,
            face_of: Vec::new(),
            faces: Vec::new(),
        };
        map.trace_faces();
        Ok(map)
    }

    pub fn dart_count(&self) -> usize {
        self.link.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.deg.len()
    }

    pub fn port_of(&self, dart: usize) -> usize {
        dart - self.offset[self.vertex_of[dart]]
    }

    /// Next dart along the face on the left of `dart`.
    pub fn face_next(&self, dart: usize) -> usize {
        let a = self.link[dart];
        let v = self.vertex_of[a];
        let q = a - self.offset[v];
        self.offset[v] + (q + self.deg[v] - 1) % self.deg[v]
    }

    fn trace_faces(&mut self) {
        let total = self.link.len();
        self.face_of = vec![usize::MAX; total];
        self.faces.clear();
        for start in 0..total {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let f = self.faces.len();
            let mut cyc = Vec::new();
            let mut d = start;
            loop {
                self.face_of[d] = f;
                cyc.push(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            self.faces.push(cyc);
        }
    }

    pub fn dart(&self, e: End) -> Option<usize> {
        match e {
            End::Port(n, p) => Some(self.offset[n as usize] + p as usize),
            End::Punct(i) => Some(self.offset[self.punct_vertex[i as usize]]),
            End::Open => None,
        }
    }

    /// Diagram end for a dart, if the dart is a node port or a puncture's
    /// interior port.
    pub fn end(&self, dart: usize) -> Option<End> {
        let v = self.vertex_of[dart];
        let p = dart - self.offset[v];
        if v < self.node_count {
            return Some(End::Port(v as u32, p as u8));
        }
        match self.frame[v - self.node_count] {
            FrameVertex::Punct(i) if p == 0 => Some(End::Punct(i)),
            _ => None,
        }
    }

    pub fn frame_vertex(&self, v: usize) -> Option<FrameVertex> {
        v.checked_sub(self.node_count).map(|i| self.frame[i])
    }

    /// Whether a dart runs along the frame.
    pub fn is_frame_dart(&self, dart: usize) -> bool {
        self.end(dart).is_none() || {
            let other = self.link[dart];
            self.end(other).is_none()
        }
    }

    /// Connected components over vertices.
    pub fn components(&self) -> Vec<usize> {
        let nv = self.vertex_count();
        let mut comp = vec![usize::MAX; nv];
        let mut c = 0;
        for s in 0..nv {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = c;
            while let Some(v) = stack.pop() {
                for p in 0..self.deg[v] {
                    let w = self.vertex_of[self.link[self.offset[v] + p]];
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            c += 1;
        }
        comp
    }

    /// `(V - E + F, 2 * components)`; equal exactly when the rotation system
    /// is planar on every component.
    pub fn euler(&self) -> (i64, i64) {
        let comp = self.components();
        let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
        let v = self.vertex_count() as i64;
        let e = (self.dart_count() / 2) as i64;
        let f = self.faces.len() as i64;
        (v - e + f, 2 * ncomp as i64)
    }

    /// The frame-facing face which runs along the frame from `a` to `b`
    /// (consecutive frame vertices), if any.
    pub fn face_of_frame_gap(&self, frame_index: usize) -> usize {
        let v = self.node_count + frame_index;
        let next_port = if self.deg[v] == 2 { 1 } else { 2 };
        self.face_of[self.offset[v] + next_port]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Editor, NodeKind, OverPair};

    #[test]
    fn empty_diagram_is_a_frame_square() {
        let m = PlanarMap::build(&SquareDiagram::new()).unwrap();
        assert_eq!(m.vertex_count(), 4);
        assert_eq!(m.faces.len(), 2);
        let (lhs, rhs) = m.euler();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn curl_has_monogon_face() {
        let mut ed = Editor::new(SquareDiagram::new());
        let x = ed.add_node(NodeKind::Crossing(OverPair::Even), 4);
        ed.connect(End::Port(x, 0), End::Port(x, 1));
        ed.connect(End::Port(x, 2), End::Port(x, 3));
        let d = ed.finish();
        let m = PlanarMap::build(&d).unwrap();
        let (lhs, rhs) = m.euler();
        assert_eq!(lhs, rhs);
        assert!(m.faces.iter().any(|f| f.len() == 1));
    }

    #[test]
    fn twisted_rotation_breaks_euler() {
        // Two interleaved loops at one crossing only embed on a torus.
        let mut ed = Editor::new(SquareDiagram::new());
        let x = ed.add_node(NodeKind::Crossing(OverPair::Even), 4);
        ed.connect(End::Port(x, 0), End::Port(x, 2));
        ed.connect(End::Port(x, 1), End::Port(x, 3));
        let d = ed.finish();
        let m = PlanarMap::build(&d).unwrap();
        let (lhs, rhs) = m.euler();
        assert_ne!(lhs, rhs);
    }
}

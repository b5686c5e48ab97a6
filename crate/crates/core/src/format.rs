//! The line-based `pdg` text format.
//!
//! ```text
//! pdg 1
//! axis 3
//! X 0 a b c d over=02
//! V 1 e f g
//! M 2 h i
//! P L 0 j
//! A a j
//! ```
//!
//! Node lines list port labels in counter-clockwise order; `P` declares a
//! puncture and the label of its own arc end; `A` joins two labels. `O <n>`
//! records crossing-free loops without nodes. A tridiagram is a header
//! followed by three `--- diagram <axis>` sections. `#` starts a comment.
//! Serialization renames labels to `<node>.<port>` and `<side><slot>`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::diagram::{Axis, End, Node, NodeKind, OverPair, Puncture, Side, SquareDiagram};
use crate::tridiagram::Tridiagram;
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Diagram(SquareDiagram),
    Tridiagram(Tridiagram),
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        msg: msg.into(),
    }
}

#[derive(Default)]
struct Section {
    axis: Option<Axis>,
    nodes: Vec<Node>,
    punctures: Vec<Puncture>,
    free_loops: u32,
    labels: HashMap<String, End>,
    ids: HashMap<String, u32>,
}

impl Section {
    fn declare(&mut self, line: usize, label: &str, end: End) -> Result<(), Error> {
        if self.labels.insert(label.to_string(), end).is_some() {
            return Err(syntax(line, format!("duplicate port label `{label}`")));
        }
        Ok(())
    }

    fn node_line(&mut self, line: usize, tag: &str, toks: &[&str]) -> Result<(), Error> {
        let id = toks
            .first()
            .ok_or_else(|| syntax(line, "missing node id"))?;
        if self.ids.contains_key(*id) {
            return Err(syntax(line, format!("duplicate node id `{id}`")));
        }
        let index = self.nodes.len() as u32;
        self.ids.insert(id.to_string(), index);
        let mut ports = Vec::new();
        let mut over = None;
        let mut label = None;
        for t in &toks[1..] {
            if let Some(v) = t.strip_prefix("over=") {
                over = Some(match v {
                    "02" => OverPair::Even,
                    "13" => OverPair::Odd,
                    _ => return Err(syntax(line, format!("bad over pair `{v}`"))),
                });
            } else if let Some(v) = t.strip_prefix("label=") {
                label = Some(v.to_string());
            } else {
                ports.push(*t);
            }
        }
        let kind = match tag {
            "X" => {
                if ports.len() != 4 {
                    return Err(syntax(line, "a crossing needs exactly 4 ports"));
                }
                NodeKind::Crossing(over.ok_or_else(|| syntax(line, "crossing without over="))?)
            }
            "V" => {
                if ports.is_empty() {
                    return Err(syntax(line, "a vertex needs at least one port"));
                }
                NodeKind::Vertex(label)
            }
            _ => {
                if ports.len() != 2 {
                    return Err(syntax(line, "a marker needs exactly 2 ports"));
                }
                NodeKind::Marker
            }
        };
        if tag != "X" && over.is_some() {
            return Err(syntax(line, "over= only applies to crossings"));
        }
        for (p, l) in ports.iter().enumerate() {
            self.declare(line, l, End::Port(index, p as u8))?;
        }
        self.nodes.push(Node {
            kind,
            links: vec![End::Open; ports.len()],
        });
        Ok(())
    }

    fn set(&mut self, e: End, to: End) -> bool {
        let slot = match e {
            End::Port(n, p) => &mut self.nodes[n as usize].links[p as usize],
            End::Punct(i) => &mut self.punctures[i as usize].link,
            End::Open => return false,
        };
        if *slot != End::Open {
            return false;
        }
        *slot = to;
        true
    }

    fn finish(self) -> SquareDiagram {
        // Sort punctures by (side, slot) and remap puncture ends.
        let mut order: Vec<usize> = (0..self.punctures.len()).collect();
        order.sort_by_key(|&i| (self.punctures[i].side, self.punctures[i].slot, i));
        let mut inv = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new as u32;
        }
        let remap = |e: End| match e {
            End::Punct(i) => End::Punct(inv[i as usize]),
            o => o,
        };
        let nodes = self
            .nodes
            .into_iter()
            .map(|n| Node {
                kind: n.kind,
                links: n.links.into_iter().map(remap).collect(),
            })
            .collect();
        let punctures = order
            .iter()
            .map(|&i| {
                let p = &self.punctures[i];
                Puncture {
                    side: p.side,
                    slot: p.slot,
                    link: remap(p.link),
                }
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

/// Parses a diagram or tridiagram document.
pub fn parse(text: &str) -> Result<Document, Error> {
    let mut header = false;
    let mut sections: Vec<(Option<Axis>, Section)> = Vec::new();
    let mut current = Section::default();
    let mut in_tri = false;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if !header {
            if toks != ["pdg", "1"] {
                return Err(syntax(line, "expected header `pdg 1`"));
            }
            header = true;
            continue;
        }
        match toks[0] {
            "---" => {
                if toks.len() != 3 || toks[1] != "diagram" {
                    return Err(syntax(line, "expected `--- diagram <axis>`"));
                }
                let axis = toks[2]
                    .parse::<u8>()
                    .ok()
                    .and_then(Axis::new)
                    .ok_or_else(|| syntax(line, "axis must be 1, 2 or 3"))?;
                if !in_tri && (!current.nodes.is_empty() || !current.punctures.is_empty()) {
                    return Err(syntax(line, "content before the first diagram section"));
                }
                if in_tri {
                    let prev = std::mem::take(&mut current);
                    let ax = sections.pop().map(|s| s.0).unwrap_or(None);
                    sections.push((ax, prev));
                }
                in_tri = true;
                sections.push((Some(axis), Section::default()));
                current = Section::default();
            }
            "axis" => {
                let axis = toks
                    .get(1)
                    .and_then(|t| t.parse::<u8>().ok())
                    .and_then(Axis::new)
                    .ok_or_else(|| syntax(line, "axis must be 1, 2 or 3"))?;
                current.axis = Some(axis);
            }
            "O" => {
                current.free_loops = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| syntax(line, "expected loop count"))?;
            }
            "X" | "V" | "M" => current.node_line(line, toks[0], &toks[1..])?,
            "P" => {
                if toks.len() != 4 {
                    return Err(syntax(line, "expected `P <edge> <slot> <port>`"));
                }
                let side = Side::from_letter(toks[1])
                    .ok_or_else(|| syntax(line, "edge must be L, R, B or T"))?;
                let slot: u32 = toks[2]
                    .parse()
                    .map_err(|_| syntax(line, "slot must be an integer"))?;
                let idx = current.punctures.len() as u32;
                current.punctures.push(Puncture {
                    side,
                    slot,
                    link: End::Open,
                });
                current.declare(line, toks[3], End::Punct(idx))?;
            }
            "A" => {
                if toks.len() != 3 {
                    return Err(syntax(line, "expected `A <port> <port>`"));
                }
                let a = *current
                    .labels
                    .get(toks[1])
                    .ok_or_else(|| syntax(line, format!("unknown port `{}`", toks[1])))?;
                let b = *current
                    .labels
                    .get(toks[2])
                    .ok_or_else(|| syntax(line, format!("unknown port `{}`", toks[2])))?;
                if a == b || !current.set(a, b) || !current.set(b, a) {
                    return Err(syntax(line, "port already connected"));
                }
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(syntax(
            last_line.max(1),
            "empty document; expected header `pdg 1`",
        ));
    }
    if in_tri {
        let ax = sections.pop().map(|s| s.0).unwrap_or(None);
        sections.push((ax, current));
        if sections.len() != 3 {
            return Err(syntax(
                last_line,
                "a tridiagram needs exactly three sections",
            ));
        }
        let mut ds: Vec<SquareDiagram> = sections
            .into_iter()
            .map(|(ax, s)| {
                let mut d = s.finish();
                d.axis = ax;
                d
            })
            .collect();
        ds.sort_by_key(|d| d.axis);
        let axes: Vec<_> = ds.iter().map(|d| d.axis).collect();
        if axes != [Axis::new(1), Axis::new(2), Axis::new(3)] {
            return Err(syntax(
                last_line,
                "tridiagram sections must cover axes 1, 2 and 3",
            ));
        }
        let mut it = ds.into_iter();
        let diagrams = [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
        return Ok(Document::Tridiagram(Tridiagram::new(diagrams)));
    }
    Ok(Document::Diagram(current.finish()))
}

pub fn parse_diagram(text: &str) -> Result<SquareDiagram, Error> {
    match parse(text)? {
        Document::Diagram(d) => Ok(d),
        Document::Tridiagram(_) => Err(syntax(1, "expected a single diagram, found a tridiagram")),
    }
}

pub fn parse_tridiagram(text: &str) -> Result<Tridiagram, Error> {
    match parse(text)? {
        Document::Tridiagram(t) => Ok(t),
        Document::Diagram(_) => Err(syntax(1, "expected a tridiagram")),
    }
}

fn puncture_labels(d: &SquareDiagram) -> Vec<String> {
    let mut seen: HashMap<(Side, u32), usize> = HashMap::new();
    d.punctures()
        .iter()
        .map(|p| {
            let n = seen.entry((p.side, p.slot)).or_insert(0);
            *n += 1;
            if *n == 1 {
                format!("{}{}", p.side.letter(), p.slot)
            } else {
                format!("{}{}_{}", p.side.letter(), p.slot, *n - 1)
            }
        })
        .collect()
}

fn write_body(out: &mut String, d: &SquareDiagram) {
    let plabels = puncture_labels(d);
    let label = |e: End| match e {
        End::Port(n, p) => format!("{n}.{p}"),
        End::Punct(i) => plabels[i as usize].clone(),
        End::Open => unreachable!(),
    };
    if d.free_loops() > 0 {
        let _ = writeln!(out, "O {}", d.free_loops());
    }
    for (i, n) in d.nodes().iter().enumerate() {
        let ports: Vec<String> = (0..n.arity()).map(|p| format!("{i}.{p}")).collect();
        match &n.kind {
            NodeKind::Crossing(o) => {
                let o = match o {
                    OverPair::Even => "02",
                    OverPair::Odd => "13",
                };
                let _ = writeln!(out, "X {i} {} over={o}", ports.join(" "));
            }
            NodeKind::Vertex(lab) => {
                let _ = write!(out, "V {i} {}", ports.join(" "));
                if let Some(l) = lab {
                    let _ = write!(out, " label={l}");
                }
                out.push('\n');
            }
            NodeKind::Marker => {
                let _ = writeln!(out, "M {i} {}", ports.join(" "));
            }
        }
    }
    for (i, p) in d.punctures().iter().enumerate() {
        let _ = writeln!(out, "P {} {} {}", p.side.letter(), p.slot, plabels[i]);
    }
    for (a, b) in d.arcs() {
        if a == End::Open || b == End::Open {
            continue;
        }
        let _ = writeln!(out, "A {} {}", label(a), label(b));
    }
}

pub fn serialize(d: &SquareDiagram) -> String {
    let mut out = String::from("pdg 1\n");
    if let Some(a) = d.axis {
        let _ = writeln!(out, "axis {a}");
    }
    write_body(&mut out, d);
    out
}

pub fn serialize_tridiagram(t: &Tridiagram) -> String {
    let mut out = String::from("pdg 1\n");
    for (i, d) in t.diagrams.iter().enumerate() {
        let _ = writeln!(out, "--- diagram {}", i + 1);
        write_body(&mut out, d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_round_trips() {
        let d = SquareDiagram::new();
        let text = serialize(&d);
        assert_eq!(text, "pdg 1\n");
        assert_eq!(parse_diagram(&text).unwrap(), d);
    }

    #[test]
    fn empty_file_is_a_syntax_error() {
        assert!(matches!(parse(""), Err(Error::Syntax { .. })));
    }

    #[test]
    fn curl_parses_with_comments() {
        let text = "pdg 1 # header\n# a curl\nX 7 a b c d over=13\nA a b\nA c d\n";
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.link(End::Port(0, 0)), End::Port(0, 1));
        let again = serialize(&d);
        assert_eq!(serialize(&parse_diagram(&again).unwrap()), again);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse("pdg 1\nX 0 a b c over=02\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        let err = parse("pdg 1\nM 0 a b\nA a z\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
        let err = parse("pdg 1\nM 0 a b\nM 1 c d\nA a c\nA a d\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 5, .. }));
    }

    #[test]
    fn mismatched_punctures_parse_but_are_kept() {
        let text = "pdg 1\nP L 0 a\nP L 1 b\nP R 0 c\nA a b\n";
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.side_count(Side::L), 2);
        assert_eq!(d.side_count(Side::R), 1);
    }

    #[test]
    fn tridiagram_sections() {
        let text = "pdg 1\n--- diagram 2\n--- diagram 1\nO 1\n--- diagram 3\n";
        let t = parse_tridiagram(text).unwrap();
        assert_eq!(t.diagrams[0].free_loops(), 1);
        let s = serialize_tridiagram(&t);
        assert_eq!(
            s,
            "pdg 1\n--- diagram 1\nO 1\n--- diagram 2\n--- diagram 3\n"
        );
        assert_eq!(serialize_tridiagram(&parse_tridiagram(&s).unwrap()), s);
    }
}

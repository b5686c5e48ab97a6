//! Combinatorial analogues of the regular-projection rules.

use std::collections::HashSet;

use serde::Serialize;

use crate::diagram::{End, NodeKind, Side, SquareDiagram};
use crate::map::PlanarMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleCheck {
    pub rule: u8,
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Hard errors: dangling ports, asymmetric arcs, unpaired punctures.
    pub structural: Vec<String>,
    pub rules: Vec<RuleCheck>,
    pub euler: Option<(i64, i64)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.structural.is_empty()
            && self.rules.iter().all(|r| r.passed)
            && self.euler.is_some_and(|(a, b)| a == b)
    }

    pub fn violated_rules(&self) -> Vec<u8> {
        self.rules
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.rule)
            .collect()
    }
}

const RULE_NAMES: [&str; 9] = [
    "double points are isolated crossings",
    "double points are transverse",
    "no marker on a double point",
    "face intersections are transverse",
    "no double point on the square's edges",
    "no curve through a corner",
    "no marker on the square's edges",
    "no vertex on a double point",
    "no vertex on the cell faces",
];

pub fn validate_diagram(d: &SquareDiagram) -> ValidationReport {
    let mut structural = Vec::new();
    let mut fail: [Option<String>; 9] = Default::default();

    for (i, n) in d.nodes().iter().enumerate() {
        match n.kind {
            NodeKind::Crossing(_) if n.arity() != 4 => {
                fail[0] = Some(format!("crossing {i} has {} ports", n.arity()));
            }
            NodeKind::Marker if n.arity() != 2 => {
                fail[3] = Some(format!("marker {i} has {} ports", n.arity()));
            }
            NodeKind::Vertex(_) if n.arity() == 0 => {
                structural.push(format!("vertex {i} has no ports"));
            }
            _ => {}
        }
        for (p, &l) in n.links.iter().enumerate() {
            let here = End::Port(i as u32, p as u8);
            check_end(d, here, l, &mut structural);
        }
    }
    let mut seen = HashSet::new();
    for (i, p) in d.punctures().iter().enumerate() {
        check_end(d, End::Punct(i as u32), p.link, &mut structural);
        if !seen.insert((p.side, p.slot)) {
            fail[4] = Some(format!(
                "two arcs meet edge {} at slot {}",
                p.side.letter(),
                p.slot
            ));
        }
    }
    for side in [Side::L, Side::B] {
        let a = d.side_count(side);
        let b = d.side_count(side.opposite());
        if a != b {
            structural.push(format!(
                "unpaired puncture: {} punctures on {} but {} on {}",
                a,
                side.letter(),
                b,
                side.opposite().letter()
            ));
            continue;
        }
        for s in [side, side.opposite()] {
            let mut slots: Vec<u32> = d
                .punctures()
                .iter()
                .filter(|p| p.side == s)
                .map(|p| p.slot)
                .collect();
            slots.sort();
            slots.dedup();
            if slots.len() == a && slots.iter().enumerate().any(|(k, &v)| k as u32 != v) {
                structural.push(format!("slots on {} are not 0..{}", s.letter(), a));
            }
        }
    }

    let euler = if structural.is_empty() && fail[4].is_none() {
        PlanarMap::build(d).ok().map(|m| m.euler())
    } else {
        None
    };
    let rules = fail
        .into_iter()
        .enumerate()
        .map(|(k, detail)| RuleCheck {
            rule: k as u8 + 1,
            name: RULE_NAMES[k],
            passed: detail.is_none(),
            detail,
        })
        .collect();
    ValidationReport {
        structural,
        rules,
        euler,
    }
}

fn check_end(d: &SquareDiagram, here: End, l: End, out: &mut Vec<String>) {
    match l {
        End::Open => out.push(format!("dangling port {here:?}")),
        End::Port(n, p) => {
            let ok = d
                .nodes()
                .get(n as usize)
                .and_then(|node| node.links.get(p as usize))
                .is_some_and(|&back| back == here);
            if !ok {
                out.push(format!("arc {here:?} -> {l:?} is not symmetric"));
            }
        }
        End::Punct(i) => {
            let ok = d
                .punctures()
                .get(i as usize)
                .is_some_and(|pu| pu.link == here);
            if !ok {
                out.push(format!("arc {here:?} -> {l:?} is not symmetric"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_diagram;

    #[test]
    fn empty_diagram_is_valid() {
        let r = validate_diagram(&SquareDiagram::new());
        assert!(r.is_valid(), "{r:?}");
    }

    #[test]
    fn shared_edge_slot_violates_rule_five() {
        let text = "pdg 1\nX 0 a b c d over=02\nP L 0 p\nP L 0 q\nP R 0 r\nP R 0 s\n\
                    A a p\nA b q\nA c r\nA d s\n";
        let r = validate_diagram(&parse_diagram(text).unwrap());
        assert!(r.structural.is_empty(), "{:?}", r.structural);
        assert_eq!(r.violated_rules(), vec![5]);
    }

    #[test]
    fn dangling_and_unpaired_are_structural() {
        let r = validate_diagram(&parse_diagram("pdg 1\nM 0 a b\n").unwrap());
        assert_eq!(r.structural.len(), 2);
        let r = validate_diagram(&parse_diagram("pdg 1\nP L 0 a\nP L 1 b\nA a b\n").unwrap());
        assert!(r.structural.iter().any(|s| s.contains("unpaired")));
        assert!(!r.is_valid());
    }

    #[test]
    fn non_planar_rotation_fails_euler() {
        let d = parse_diagram("pdg 1\nX 0 a b c d over=02\nA a c\nA b d\n").unwrap();
        let r = validate_diagram(&d);
        assert!(r.structural.is_empty());
        assert!(!r.is_valid());
    }
}

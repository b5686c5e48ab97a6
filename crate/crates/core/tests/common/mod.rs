#![allow(dead_code)]

use periodica::moves::{expand, MoveApplication, MoveKind};
use periodica::strands::{closed_classes, cycle_lattice, open_classes};
use periodica::{canonical_code, parse_diagram, strands, validate_diagram, SquareDiagram};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEEDS: &[&str] = &[
    "pdg 1\nX 0 a b c d over=02\nA a b\nA c d\n",
    "pdg 1\nP L 0 a\nP R 0 b\nA a b\n",
    "pdg 1\nX 0 r t l b over=02\nP R 0 pr\nP T 0 pt\nP L 0 pl\nP B 0 pb\nA r pr\nA t pt\nA l pl\nA b pb\n",
    "pdg 1\nM 0 a b\nA a b\n",
    "pdg 1\nV 0 a0 a1 a2\nV 1 b0 b1 b2\nP L 0 l\nP R 0 r\nP B 0 bb\nP T 0 tt\n\
     A a0 b1\nA a1 tt\nA a2 l\nA b0 r\nA b2 bb\n",
    "pdg 1\nX 0 p0 p1 p2 p3 over=13\nX 1 q0 q1 q2 q3 over=13\nA p1 q2\nA p3 q0\nA p0 q3\nA p2 q1\n",
    "pdg 1\nV 0 a0 a1 a2\nV 1 b0 b1 b2\nM 2 m0 m1\nP L 0 l\nP R 0 r\nP B 0 bb\nP T 0 tt\n\
     A a0 m0\nA m1 b1\nA a1 tt\nA a2 l\nA b0 r\nA b2 bb\n",
    "pdg 1\nX 0 a0 a1 a2 a3 over=02\nX 1 b0 b1 b2 b3 over=13\nP L 0 l0\nP L 1 l1\nP R 0 r0\nP R 1 r1\n\
     P B 0 bb\nP T 0 tt\nA a0 r0\nA a1 b3\nA a2 l0\nA a3 bb\nA b0 r1\nA b1 tt\nA b2 l1\n",
];

pub fn seeds() -> Vec<SquareDiagram> {
    SEEDS
        .iter()
        .map(|s| parse_diagram(s).expect("seed parses"))
        .collect()
}

/// Size limits for random walks.
pub fn small(d: &SquareDiagram) -> bool {
    d.crossing_count() <= 4
        && d.marker_count() <= 4
        && d.punctures().len() <= 12
        && d.free_loops() <= 1
}

/// A random diagram reached from a seed by up to `steps` random moves.
pub fn random_diagram(rng: &mut ChaCha8Rng, steps: usize) -> SquareDiagram {
    let seeds = seeds();
    let mut d = seeds.choose(rng).expect("seeds").clone();
    for _ in 0..steps {
        let next: Vec<SquareDiagram> = expand(&d)
            .into_iter()
            .map(|(_, r)| r)
            .filter(small)
            .collect();
        match next.choose(rng) {
            Some(r) => d = r.clone(),
            None => break,
        }
    }
    d
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn expected_crossing_delta(d: &SquareDiagram, m: &MoveApplication) -> Option<i64> {
    use periodica::moves::Direction::*;
    let sign = |f: i64| if m.direction == Forward { -f } else { f };
    Some(match m.kind {
        MoveKind::R1 | MoveKind::R11 => sign(1),
        MoveKind::R2 | MoveKind::R4 => sign(2),
        MoveKind::R10 => {
            let v = match m.site.ends[0] {
                periodica::End::Port(v, _) => v,
                _ => return None,
            };
            let arity = d.node(v).arity() as i64;
            arity - 2 * m.site.span as i64
        }
        _ => 0,
    })
}

/// Checks one (diagram, move, result) triple; returns a failure message.
pub fn check_move(d: &SquareDiagram, m: &MoveApplication, r: &SquareDiagram) -> Result<(), String> {
    let rep = validate_diagram(r);
    if !rep.is_valid() {
        return Err(format!("invalid result: {rep:?}"));
    }
    let dc = r.crossing_count() as i64 - d.crossing_count() as i64;
    if Some(dc) != expected_crossing_delta(d, m) {
        return Err(format!("crossing delta {dc}"));
    }
    if strands(d).len() != strands(r).len() {
        return Err("strand count changed".into());
    }
    if closed_classes(d) != closed_classes(r) {
        return Err(format!(
            "closed classes {:?} -> {:?}",
            closed_classes(d),
            closed_classes(r)
        ));
    }
    if cycle_lattice(d) != cycle_lattice(r) {
        return Err("cycle lattice changed".into());
    }
    if !matches!(m.kind, MoveKind::R12 | MoveKind::R13) && open_classes(d) != open_classes(r) {
        return Err(format!(
            "open classes {:?} -> {:?}",
            open_classes(d),
            open_classes(r)
        ));
    }
    let code = canonical_code(d).map_err(|e| e.to_string())?;
    let back = expand(r)
        .into_iter()
        .any(|(m2, r2)| m2.kind == m.kind && canonical_code(&r2).is_ok_and(|c| c == code));
    if !back {
        return Err("no inverse move".into());
    }
    Ok(())
}

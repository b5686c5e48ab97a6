mod common;

use periodica::search::*;
use periodica::{canonical_code, parse_diagram, SquareDiagram, Tridiagram};
use rand::seq::SliceRandom;
use rand::Rng;

fn fixture(name: &str) -> SquareDiagram {
    let path = format!("{}/data/diagrams/{name}.pdg", env!("CARGO_MANIFEST_DIR"));
    parse_diagram(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn budget() -> SimplifyBudget {
    SimplifyBudget::default()
}

/// Small enough that the property tests over random samples stay quick.
fn fast() -> SimplifyBudget {
    SimplifyBudget {
        max_states: 200,
        max_extra_crossings: 1,
        max_extra_markers: 1,
        max_extra_punctures: 1,
        ..budget()
    }
}

/// Small random diagrams without vertices, so the searches stay quick.
fn samples(n: usize, seed: u64) -> Vec<SquareDiagram> {
    let mut rng = common::rng(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let d = common::random_diagram(&mut rng, 6);
        if d.vertex_count() == 0 && d.crossing_count() <= 3 {
            out.push(d);
        }
    }
    out
}

#[test]
fn curl_simplifies_to_a_plain_thread() {
    let d = fixture("curl");
    let s = simplify_report(&d, &budget()).unwrap();
    assert_eq!(s.crossings(), 0);
    assert!(s.exhaustive);
    let thread = parse_diagram("pdg 1\nP L 0 l\nP R 0 r\nA l r\n").unwrap();
    assert_eq!(s.code, canonical_code(&thread).unwrap());
    assert!(is_ground_state(&d, &budget()).unwrap().ground);
}

#[test]
fn hopf_unlinks_with_one_change() {
    for name in ["hopf", "ring-on-thread"] {
        let d = fixture(name);
        assert_eq!(
            simplify(&d, &budget()).unwrap().crossing_count(),
            2,
            "{name}"
        );
        let fixed = untangle_fixed_shadow(&d, &budget()).unwrap();
        let bfs = untangle_bfs(&d, 3, &budget()).unwrap();
        for r in [&fixed, &bfs] {
            assert_eq!((r.u_upper, r.min_crossings), (1, 0), "{name} {:?}", r.mode);
            assert_eq!(r.witness.len(), r.u_upper);
            assert!(r.exhaustive);
            let end = replay(&d, r).unwrap();
            assert_eq!(end.crossing_count(), 0);
            assert!(r.ground_codes.contains(&canonical_code(&end).unwrap()));
            assert!(!r.ground_codes.contains(&r.input_code));
        }
        assert!(!is_ground_state(&d, &budget()).unwrap().ground);
    }
}

#[test]
fn zero_crossing_diagrams_are_ground_states() {
    for d in common::seeds()
        .into_iter()
        .filter(|d| d.crossing_count() == 0)
    {
        let r = untangle_bfs(&d, 2, &budget()).unwrap();
        assert_eq!((r.u_upper, r.layers), (0, 0));
        assert!(r.ground_codes.contains(&r.input_code));
        assert_eq!(untangle_fixed_shadow(&d, &budget()).unwrap().u_upper, 0);
    }
}

#[test]
fn simplify_is_idempotent_and_never_adds_crossings() {
    for d in samples(10, 11) {
        let s = simplify_report(&d, &fast()).unwrap();
        assert!(s.crossings() <= d.crossing_count());
        let again = simplify_report(&s.diagram, &fast()).unwrap();
        assert_eq!(again.code, s.code);
    }
}

#[test]
fn results_ignore_labels() {
    let mut rng = common::rng(5);
    for d in samples(5, 12) {
        let n = d.nodes().len();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(&mut rng);
        let rot: Vec<u8> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let e = d.relabelled(&perm, &rot);
        let (a, b) = (
            untangle_bfs(&d, 2, &fast()).unwrap(),
            untangle_bfs(&e, 2, &fast()).unwrap(),
        );
        assert_eq!(a.input_code, b.input_code);
        assert_eq!(
            (a.u_upper, a.min_crossings, &a.ground_codes),
            (b.u_upper, b.min_crossings, &b.ground_codes)
        );
    }
}

#[test]
fn larger_budgets_do_not_worsen_bounds() {
    let small = SimplifyBudget {
        max_states: 20,
        ..fast()
    };
    let big = fast();
    for d in samples(5, 13) {
        let (a, b) = (
            simplify_report(&d, &small).unwrap(),
            simplify_report(&d, &big).unwrap(),
        );
        assert!(b.crossings() <= a.crossings());
        let (x, y) = (
            untangle_bfs(&d, 1, &big).unwrap(),
            untangle_bfs(&d, 2, &big).unwrap(),
        );
        assert!(y.min_crossings <= x.min_crossings);
        if y.min_crossings == x.min_crossings {
            assert!(y.u_upper <= x.u_upper);
        }
    }
}

#[test]
fn bfs_is_no_worse_than_the_fixed_shadow() {
    for d in samples(5, 14) {
        let f = untangle_fixed_shadow(&d, &fast()).unwrap();
        let b = untangle_bfs(&d, d.crossing_count(), &fast()).unwrap();
        assert!(b.min_crossings <= f.min_crossings);
        if f.exhaustive && b.exhaustive && b.min_crossings == f.min_crossings {
            assert!(b.u_upper <= f.u_upper, "{}", periodica::serialize(&d));
        }
        // u = 0 exactly when the input already achieves the shadow minimum.
        let own = simplify(&d, &fast()).unwrap().crossing_count();
        assert_eq!(f.u_upper == 0, own == f.min_crossings);
    }
}

#[test]
fn oracle_bounds_simplify() {
    let mut rng = common::rng(15);
    let mut small = Vec::new();
    while small.len() < 4 {
        let d = common::random_diagram(&mut rng, 5);
        if d.vertex_count() == 0 && d.punctures().len() <= 2 && d.nodes().len() <= 4 {
            small.push(d);
        }
    }
    for d in small {
        let caps = OracleCaps {
            max_crossings: d.crossing_count(),
            max_markers: d.marker_count(),
            max_nodes: d.nodes().len(),
            max_punctures: d.punctures().len(),
            max_free_loops: d.free_loops() + 2,
            max_states: 100_000,
        };
        let o = brute_oracle(&d, &caps).unwrap();
        assert!(o.min_crossings <= simplify(&d, &fast()).unwrap().crossing_count());
        if d.crossing_count() == 0 {
            assert_eq!(o.distance, 0);
        }
    }
}

#[test]
fn fixed_shadow_guards_its_budget() {
    let d = fixture("hopf");
    let tight = SimplifyBudget {
        max_states: 3,
        ..budget()
    };
    assert!(matches!(
        untangle_fixed_shadow(&d, &tight),
        Err(periodica::Error::Budget(_))
    ));
}

#[test]
fn results_round_trip_through_json() {
    let r = untangle_bfs(&fixture("hopf"), 2, &budget()).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: UntanglingResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["u_upper"], 1);
    assert!(v["witness"][0]["crossing"].is_u64());
}

#[test]
fn empty_tridiagram_has_zero_bound() {
    let b = crossing_bound(&Tridiagram::empty(), &budget()).unwrap();
    assert_eq!((b.triplet.as_array(), b.triplet.c_value), ([0, 0, 0], 0));
    assert_eq!(b.exhaustive, [true; 3]);
}

use periodica::net::load_net;
use periodica::projection::{
    face_crossings, is_generic, perturb_generic, project, tridiagram_from_net, tridiagram_of,
    violations, DEFAULT_EPS, DEFAULT_TRIES,
};
use periodica::tridiagram::check_tridiagram;
use periodica::{strands, validate_diagram, Axis, PeriodicEmbedding};

const NETS: &[(&str, &str)] = &[
    ("srs", include_str!("../data/nets/srs.net")),
    (
        "srs-enantiomorphic",
        include_str!("../data/nets/srs-enantiomorphic.net"),
    ),
    (
        "srs-translated",
        include_str!("../data/nets/srs-translated.net"),
    ),
    ("dia-c", include_str!("../data/nets/dia-c.net")),
    (
        "dia-c-two-components",
        include_str!("../data/nets/dia-c-two-components.net"),
    ),
];

fn generic(text: &str) -> PeriodicEmbedding {
    perturb_generic(&load_net(text).unwrap(), 7, DEFAULT_EPS, DEFAULT_TRIES).unwrap()
}

#[test]
fn fixture_sizes() {
    let sizes: Vec<(usize, usize, usize)> = NETS
        .iter()
        .map(|(_, t)| {
            let n = load_net(t).unwrap();
            (n.vertices.len(), n.edges.len(), n.component_count())
        })
        .collect();
    assert_eq!(
        sizes,
        vec![(4, 6, 1), (8, 12, 2), (8, 12, 2), (2, 4, 1), (4, 8, 2)]
    );
    for (_, t) in NETS {
        let n = load_net(t).unwrap();
        let expect = if n.vertices[0].label == "A" { 4 } else { 3 };
        assert!((0..n.vertices.len()).all(|v| n.degree(v) == expect));
    }
}

#[test]
fn every_fixture_projects_to_a_consistent_tridiagram() {
    for (name, text) in NETS {
        let e = generic(text);
        assert!(violations(&e).is_empty(), "{name}");
        let t = tridiagram_of(&e).unwrap_or_else(|err| panic!("{name}: {err}"));
        for axis in Axis::ALL {
            let d = t.diagram(axis);
            assert!(validate_diagram(d).is_valid(), "{name} axis {axis}");
            assert_eq!(
                d.marker_count(),
                face_crossings(&e, axis),
                "{name} axis {axis}"
            );
        }
        assert!(check_tridiagram(&t).consistent, "{name}");
        println!("{name}: {:?}", t.triplet().as_array());
    }
}

#[test]
fn projection_is_deterministic_per_seed() {
    let e = load_net(NETS[0].1).unwrap();
    let a = tridiagram_from_net(&e, 11).unwrap();
    let b = tridiagram_from_net(&e, 11).unwrap();
    assert_eq!(a, b);
}

#[test]
fn generic_input_is_left_alone() {
    let e =
        load_net("vertex a 0.31 0.27 0.43\nedge a a 1 0 0 0.55 0.35 0.47 0.9 0.22 0.4\n").unwrap();
    assert!(is_generic(&e));
    assert_eq!(perturb_generic(&e, 1, 0.0, 1).unwrap(), e);
}

#[test]
fn thread_along_the_axis_is_a_marker_loop() {
    let e = generic("vertex a 0.3 0.4 0.5\nedge a a 0 0 1\n");
    let d = project(&e, Axis::new(3).unwrap()).unwrap();
    assert_eq!(
        (d.marker_count(), d.crossing_count(), d.punctures().len()),
        (1, 0, 0)
    );
    assert_eq!(d.vertex_count(), 0);
}

#[test]
fn overlapping_edges_are_separated() {
    let text = "vertex a 0.3 0.4 0.5\nvertex b 0.3 0.4 0.6\nedge a a 1 0 0\nedge b b 1 0 0\n";
    let raw = load_net(text).unwrap();
    assert!(violations(&raw).iter().any(|v| v.rule == 1));
    let d = project(&generic(text), Axis::new(3).unwrap()).unwrap();
    assert_eq!(strands(&d).len(), 2);
}

#[test]
fn strand_classes_follow_the_translations() {
    // Threads along (1,0,0) and (0,1,1); projecting along axis 1 sees the
    // plane (y, z), along axis 3 the plane (x, y).
    let e = generic("vertex a 0.3 0.4 0.5\nvertex b 0.7 0.2 0.1\nedge a a 1 0 0\nedge b b 0 1 1\n");
    let classes = |axis: u8| {
        let mut c: Vec<[i64; 3]> = strands(&project(&e, Axis::new(axis).unwrap()).unwrap())
            .into_iter()
            .map(|s| s.homology_class)
            .collect();
        c.sort();
        c
    };
    // Components are (horizontal, vertical, depth) of the projection.
    assert_eq!(classes(1), vec![[0, 0, 1], [1, 1, 0]]);
    assert_eq!(classes(2), vec![[0, 1, 0], [1, 0, 1]]);
    assert_eq!(classes(3), vec![[0, 1, 1], [1, 0, 0]]);
}

#[test]
fn bad_nets_report_a_rule() {
    let e = load_net("vertex a 0 0.5 0.5\nedge a a 1 0 0\n").unwrap();
    let v = violations(&e);
    assert_eq!(v[0].rule, 9);
    let err = perturb_generic(&e, 3, 0.0, 2).unwrap_err();
    assert!(err.to_string().contains("rule 9"), "{err}");
}

//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so every line is printed; exits non-zero if a gating check fails.

mod common;

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use periodica::moves::expand;
use periodica::projection::tridiagram_from_net;
use periodica::render::{render_tridiagram_svg, RenderStyle};
use periodica::search::{
    crossing_bound, untangle_bfs, untangle_fixed_shadow, untangle_tridiagram, Ceiling, Closure,
    OracleCaps, Search,
};
use periodica::{
    canonical_code, canonical_form, load_net, parse_diagram, serialize, serialize_tridiagram,
    shadow_code, SimplifyBudget, SquareDiagram, Tridiagram,
};
use rand::seq::IndexedRandom;

type Outcome = Result<String, String>;
/// Name, whether it gates the exit status, and the check.
type Criterion = (&'static str, bool, fn() -> Outcome);

fn seed() -> u64 {
    std::env::var("PERIODICA_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(7)
}

fn net(name: &str) -> Tridiagram {
    let path = format!("{}/data/nets/{name}.net", env!("CARGO_MANIFEST_DIR"));
    let e = load_net(&std::fs::read_to_string(path).expect("net fixture")).expect("net parses");
    tridiagram_from_net(&e, seed()).expect("projection")
}

fn fixture(name: &str) -> SquareDiagram {
    let path = format!("{}/data/diagrams/{name}.pdg", env!("CARGO_MANIFEST_DIR"));
    parse_diagram(&std::fs::read_to_string(path).expect("fixture")).expect("fixture parses")
}

fn within(t0: Instant, limit: Duration) -> Result<(), String> {
    let dt = t0.elapsed();
    if dt <= limit {
        Ok(())
    } else {
        Err(format!("took {dt:.1?}, limit {limit:?}"))
    }
}

fn dia_c() -> Outcome {
    let t0 = Instant::now();
    let t = net("dia-c");
    let bound = crossing_bound(&t, &SimplifyBudget::default()).map_err(|e| e.to_string())?;
    let tri = bound.triplet;
    if tri.as_array() != [0, 0, 0] || tri.c_value != 0 {
        return Err(format!("triplet {:?}", tri.as_array()));
    }
    let u = untangle_tridiagram(&t, 2, &SimplifyBudget::default()).map_err(|e| e.to_string())?;
    if !u.ground {
        return Err("not reported as a ground state".into());
    }
    within(t0, Duration::from_secs(5))?;
    Ok(format!(
        "triplet (0,0,0), c = 0, ground, {:.2?}",
        t0.elapsed()
    ))
}

fn srs_ground_states() -> Outcome {
    let mut parts = Vec::new();
    for name in ["srs", "srs-enantiomorphic", "srs-translated"] {
        let t0 = Instant::now();
        let t = net(name);
        let u =
            untangle_tridiagram(&t, 2, &SimplifyBudget::default()).map_err(|e| e.to_string())?;
        let us: Vec<usize> = u.axes.iter().map(|r| r.u_upper).collect();
        if us != [0, 0, 0] {
            return Err(format!("{name}: u_upper per axis {us:?}"));
        }
        within(t0, Duration::from_secs(60)).map_err(|e| format!("{name}: {e}"))?;
        parts.push(format!(
            "{name} u=0 at {:?} in {:.1?}",
            u.best_triplet.as_array(),
            t0.elapsed()
        ));
    }
    Ok(parts.join("; "))
}

fn hopf() -> Outcome {
    let t0 = Instant::now();
    let d = fixture("hopf");
    let b = SimplifyBudget::default();
    let f = untangle_fixed_shadow(&d, &b).map_err(|e| e.to_string())?;
    let g = untangle_bfs(&d, 2, &b).map_err(|e| e.to_string())?;
    if (f.u_upper, g.u_upper) != (1, 1) {
        return Err(format!("fixed {} bfs {}", f.u_upper, g.u_upper));
    }
    within(t0, Duration::from_secs(1))?;
    Ok(format!(
        "u_upper = 1 by both methods in {:.0?}",
        t0.elapsed()
    ))
}

fn reconstructed_figures() -> Outcome {
    Err(
        "no transcribed fixtures for the three figure diagrams; targets 4, 6 and 8 unchecked"
            .into(),
    )
}

/// Every state reachable from simple seeds by moves and crossing changes
/// within the caps; one representative per shadow.
fn shadows(seeds: &[SquareDiagram], caps: &OracleCaps) -> BTreeMap<Vec<u8>, SquareDiagram> {
    let mut out = BTreeMap::new();
    let mut seen = HashSet::new();
    let mut queue: VecDeque<SquareDiagram> = seeds.iter().cloned().collect();
    for d in seeds {
        seen.insert(canonical_code(d).expect("code"));
    }
    while let Some(d) = queue.pop_front() {
        let key = shadow_code(&d).expect("shadow code").0;
        out.entry(key)
            .or_insert_with(|| canonical_form(&d.shadow()).expect("code").1);
        let mut next: Vec<SquareDiagram> = expand(&d).into_iter().map(|(_, r)| r).collect();
        next.extend(
            d.crossings()
                .map(|x| d.crossing_change(x).expect("crossing")),
        );
        for r in next {
            if caps.admits(&r) && seen.insert(canonical_code(&r).expect("code")) {
                queue.push_back(r);
            }
        }
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let t0 = Instant::now();
    let seeds: Vec<SquareDiagram> = [
        "pdg 1\n",
        "pdg 1\nP L 0 a\nP R 0 b\nA a b\n",
        "pdg 1\nP B 0 a\nP T 0 b\nA a b\n",
        "pdg 1\nM 0 a b\nA a b\n",
    ]
    .iter()
    .map(|s| parse_diagram(s).expect("seed"))
    .collect();
    let ceiling = Ceiling {
        max_crossings: 3,
        max_markers: 2,
        max_nodes: 5,
        max_punctures: 4,
        max_free_loops: 2,
    };
    let caps = OracleCaps {
        max_crossings: ceiling.max_crossings,
        max_markers: ceiling.max_markers,
        max_nodes: ceiling.max_nodes,
        max_punctures: ceiling.max_punctures,
        max_free_loops: ceiling.max_free_loops,
        max_states: 1_000_000,
    };
    let universe = Closure::build(&seeds, &caps).map_err(|e| e.to_string())?;
    let shadows = shadows(&seeds, &caps);
    let search = Search::new(&SimplifyBudget::within(ceiling, 1_000_000));
    let mut bad = Vec::new();
    for d in shadows.values() {
        let r = search
            .untangle_bfs(d, ceiling.max_crossings)
            .map_err(|e| e.to_string())?;
        let o = universe
            .query(d)
            .map_err(|e| e.to_string())?
            .ok_or("shadow outside the oracle universe")?;
        if !r.exhaustive || (r.min_crossings, r.u_upper) != (o.min_crossings, o.distance) {
            bad.push(format!(
                "bfs ({}, {}) oracle ({}, {})\n{}",
                r.min_crossings,
                r.u_upper,
                o.min_crossings,
                o.distance,
                serialize(d)
            ));
        }
    }
    if let Some(first) = bad.first() {
        return Err(format!(
            "{} of {} shadows differ; first: {first}",
            bad.len(),
            shadows.len()
        ));
    }
    within(t0, Duration::from_secs(600))?;
    Ok(format!(
        "{} shadows over {} states agree, {:.1?}",
        shadows.len(),
        universe.len(),
        t0.elapsed()
    ))
}

fn move_suite() -> Outcome {
    const PAIRS: usize = 10_000;
    let mut rng = common::rng(seed());
    let mut done = 0;
    let mut failures = Vec::new();
    while done < PAIRS {
        let mut d = common::seeds().choose(&mut rng).expect("seeds").clone();
        for _ in 0..10 {
            let all: Vec<_> = expand(&d)
                .into_iter()
                .filter(|(_, r)| common::small(r))
                .collect();
            let Some((m, r)) = all.choose(&mut rng) else {
                break;
            };
            done += 1;
            if let Err(e) = common::check_move(&d, m, r) {
                failures.push(format!("{m}: {e}\n{}", serialize(&d)));
            }
            if let Some(x) = d.crossings().collect::<Vec<_>>().choose(&mut rng) {
                let once = d.crossing_change(*x).map_err(|e| e.to_string())?;
                if once.crossing_change(*x).map_err(|e| e.to_string())? != d
                    || shadow_code(&once).ok() != shadow_code(&d).ok()
                {
                    failures.push(format!("crossing change at {x}\n{}", serialize(&d)));
                }
            }
            d = r.clone();
            if done == PAIRS {
                break;
            }
        }
    }
    match failures.first() {
        None => Ok(format!("{done} pairs, 0 failures")),
        Some(f) => Err(format!("{} failures; first: {f}", failures.len())),
    }
}

/// Every byte-level output of a fixed pipeline.
fn outputs() -> Result<Vec<String>, String> {
    let b = SimplifyBudget::default();
    let mut out = Vec::new();
    for name in ["srs", "srs-translated"] {
        let t = net(name);
        out.push(serialize_tridiagram(&t));
        let bound = crossing_bound(&t, &b).map_err(|e| e.to_string())?;
        let simplified = bound.diagrams.clone().ok_or("no diagrams")?;
        out.push(serialize_tridiagram(&simplified));
        out.push(serde_json::to_string(&bound).map_err(|e| e.to_string())?);
        out.push(render_tridiagram_svg(&t, &RenderStyle::default()).map_err(|e| e.to_string())?);
    }
    for name in ["hopf", "ring-on-thread", "curl"] {
        let d = fixture(name);
        let r = untangle_bfs(&d, 2, &b).map_err(|e| e.to_string())?;
        out.push(serde_json::to_string(&r).map_err(|e| e.to_string())?);
        let f = untangle_fixed_shadow(&d, &b).map_err(|e| e.to_string())?;
        out.push(serde_json::to_string(&f).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let mut runs = Vec::new();
    for threads in [1, 2, 4, 1, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        runs.push((threads, pool.install(outputs)?));
    }
    let (_, first) = &runs[0];
    for (threads, r) in &runs[1..] {
        if r != first {
            return Err(format!("outputs differ with {threads} threads"));
        }
    }
    let bytes: usize = first.iter().map(String::len).sum();
    Ok(format!(
        "{} outputs ({bytes} bytes) identical over {} runs with 1, 2 and 4 threads",
        first.len(),
        runs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("dia-c zero-crossing tridiagram", true, dia_c),
        ("srs ground states", true, srs_ground_states),
        ("Hopf unlinking", true, hopf),
        ("reconstructed-figure targets", false, reconstructed_figures),
        ("oracle equivalence", true, oracle_equivalence),
        ("move-engine property suite", true, move_suite),
        ("determinism", true, determinism),
    ];
    let mut failed = 0;
    for (name, gating, run) in criteria {
        let outcome = run();
        let tier = if gating { "" } else { " (non-gating)" };
        match outcome {
            Ok(detail) => println!("PASS {name}{tier}: {detail}"),
            Err(detail) => {
                println!("FAIL {name}{tier}: {detail}");
                failed += gating as usize;
            }
        }
    }
    if failed > 0 {
        println!("{failed} gating criteria failed");
        std::process::exit(1);
    }
}

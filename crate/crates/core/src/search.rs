//! Simplification, crossing bounds and untangling searches.
//!
//! Every number reported here is an upper bound relative to the budget used:
//! the minima range over all R-equivalent diagrams, which cannot be
//! enumerated in general. Results carry an `exhaustive` flag that is set
//! only when the explored closure was finished within the budget.
//!
//! All searches deduplicate states by canonical code and break ties by the
//! least code, so results depend only on the input's code and the budget
//! (never on node labels or thread scheduling), except when a wall-clock
//! `time_limit` cuts a search short.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::code::{canonical_form, CanonicalCode};
use crate::diagram::{Axis, NodeId, SquareDiagram};
use crate::moves::{expand, MoveKind};
use crate::parallel;
use crate::tridiagram::{CrossingTriplet, Tridiagram};
use crate::{Error, Result};

/// Limits for the move search inside [`simplify`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimplifyBudget {
    /// States visited per exploration before giving up.
    pub max_states: usize,
    /// How far above the current minimum crossing count the search may climb.
    pub max_extra_crossings: usize,
    /// Markers allowed beyond those of the starting state.
    pub max_extra_markers: usize,
    /// Boundary punctures allowed beyond those of the starting state.
    pub max_extra_punctures: usize,
    /// Wall-clock limit in seconds for a whole search call.
    pub time_limit: Option<f64>,
    /// Absolute size limits on every state entered, on top of the
    /// relative ones.
    pub ceiling: Option<Ceiling>,
}

/// Absolute size limits for diagrams entered by a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ceiling {
    pub max_crossings: usize,
    pub max_markers: usize,
    pub max_nodes: usize,
    pub max_punctures: usize,
    pub max_free_loops: u32,
}

impl Ceiling {
    /// Limits a little above the size of `d`.
    pub fn around(d: &SquareDiagram) -> Ceiling {
        Ceiling {
            max_crossings: d.crossing_count() + 1,
            max_markers: d.marker_count() + 2,
            max_nodes: d.nodes().len() + 2,
            max_punctures: d.punctures().len() + 2,
            max_free_loops: d.free_loops() + 2,
        }
    }

    pub fn admits(&self, d: &SquareDiagram) -> bool {
        d.crossing_count() <= self.max_crossings
            && d.marker_count() <= self.max_markers
            && d.nodes().len() <= self.max_nodes
            && d.punctures().len() <= self.max_punctures
            && d.free_loops() <= self.max_free_loops
    }
}

impl Default for SimplifyBudget {
    fn default() -> Self {
        SimplifyBudget {
            max_states: 1500,
            max_extra_crossings: 1,
            max_extra_markers: 2,
            max_extra_punctures: 2,
            time_limit: None,
            ceiling: None,
        }
    }
}

impl SimplifyBudget {
    /// Greedy reduction only: no exploration beyond the starting state.
    pub fn greedy() -> Self {
        SimplifyBudget {
            max_states: 1,
            ..Self::default()
        }
    }

    /// Only `ceiling` limits the search. With a large enough `max_states`,
    /// simplification then finds the best state of the whole move class
    /// within the ceiling.
    pub fn within(ceiling: Ceiling, max_states: usize) -> Self {
        SimplifyBudget {
            max_states,
            max_extra_crossings: usize::MAX / 4,
            max_extra_markers: usize::MAX / 4,
            max_extra_punctures: usize::MAX / 4,
            time_limit: None,
            ceiling: Some(ceiling),
        }
    }

    fn admits(&self, d: &SquareDiagram) -> bool {
        self.ceiling.is_none_or(|c| c.admits(d))
    }

    fn deadline(&self) -> Option<Instant> {
        self.time_limit
            .filter(|t| t.is_finite() && *t >= 0.0)
            .map(|t| Instant::now() + Duration::from_secs_f64(t))
    }
}

/// When a search must stop early: a deadline or an external cancel flag.
#[derive(Clone, Default)]
struct Stop {
    deadline: Option<Instant>,
    cancel: Option<Arc<AtomicBool>>,
}

impl Stop {
    fn hit(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
            || self
                .cancel
                .as_ref()
                .is_some_and(|c| c.load(Ordering::Relaxed))
    }
}

/// Outcome of [`simplify_report`].
#[derive(Clone, Debug, PartialEq)]
pub struct Simplified {
    /// Canonical form of the chosen state.
    pub diagram: SquareDiagram,
    pub code: CanonicalCode,
    /// Whether every exploration round finished its closure within budget.
    pub exhaustive: bool,
    /// States visited over all rounds.
    pub states: usize,
    /// The whole move class of the input, when the search covered it (only
    /// possible under a [`Ceiling`]).
    pub class: Option<Class>,
}

/// Canonical members of a move class, sorted by code.
pub type Class = Arc<Vec<(CanonicalCode, SquareDiagram)>>;

impl Simplified {
    pub fn crossings(&self) -> usize {
        self.diagram.crossing_count()
    }
}

/// Ordering used to pick a representative: crossings, then size, then code.
fn rank(d: &SquareDiagram, code: &CanonicalCode) -> (usize, usize, CanonicalCode) {
    let size = d.nodes().len() + d.punctures().len() + d.free_loops() as usize;
    (d.crossing_count(), size, code.clone())
}

/// Strictly crossing-reducing moves to a fixed point, with one step of
/// lookahead through crossing-neutral boundary transfers.
fn greedy(mut d: SquareDiagram, b: &SimplifyBudget) -> SquareDiagram {
    'outer: loop {
        let c = d.crossing_count();
        if c == 0 {
            return d;
        }
        let next: Vec<_> = expand(&d)
            .into_iter()
            .filter(|(_, r)| b.admits(r))
            .collect();
        if let Some((_, r)) = next.iter().find(|(_, r)| r.crossing_count() < c) {
            d = r.clone();
            continue;
        }
        let p = d.punctures().len();
        for (m, r) in &next {
            let transfer = matches!(
                m.kind,
                MoveKind::R3 | MoveKind::R6 | MoveKind::R7 | MoveKind::R8 | MoveKind::R9
            );
            if !transfer || r.crossing_count() != c || r.punctures().len() > p + 2 {
                continue;
            }
            if let Some((_, r2)) = expand(r)
                .into_iter()
                .find(|(_, r2)| r2.crossing_count() < c && b.admits(r2))
            {
                d = r2;
                continue 'outer;
            }
        }
        return d;
    }
}

struct Caps {
    extra_crossings: usize,
    markers: usize,
    punctures: usize,
    free_loops: u32,
}

impl Caps {
    fn new(start: &SquareDiagram, b: &SimplifyBudget) -> Caps {
        let free_loops = match b.ceiling {
            Some(c) => c.max_free_loops,
            None => start.free_loops() + 2,
        };
        Caps {
            extra_crossings: b.max_extra_crossings,
            markers: start.marker_count().saturating_add(b.max_extra_markers),
            punctures: start
                .punctures()
                .len()
                .saturating_add(b.max_extra_punctures),
            free_loops,
        }
    }

    fn admits(&self, d: &SquareDiagram, min_crossings: usize) -> bool {
        d.crossing_count() <= min_crossings.saturating_add(self.extra_crossings)
            && d.marker_count() <= self.markers
            && d.punctures().len() <= self.punctures
            && d.free_loops() <= self.free_loops
    }
}

struct Explored {
    best: SquareDiagram,
    code: CanonicalCode,
    complete: bool,
    /// Every state reached, when nothing but the ceiling pruned the search:
    /// the visited set is then a whole move class and shares the result.
    class: Option<Class>,
    states: usize,
}

/// One breadth-first exploration round from a canonical state.
fn explore(start: SquareDiagram, code: CanonicalCode, b: &SimplifyBudget, stop: &Stop) -> Explored {
    let caps = Caps::new(&start, b);
    let mut best_rank = rank(&start, &code);
    let mut best = start.clone();
    let mut min_c = start.crossing_count();
    let mut visited: HashSet<CanonicalCode> = HashSet::new();
    // Members are only kept when they can form a class.
    let keep = b.ceiling.is_some();
    let mut members = Vec::new();
    if keep {
        members.push((code.clone(), start.clone()));
    }
    visited.insert(code);
    let mut frontier = vec![start];
    let mut complete = true;
    // A start above the ceiling is not part of the class it reaches.
    let mut pruned = !b.admits(&frontier[0]);
    while !frontier.is_empty() {
        if visited.len() >= b.max_states || stop.hit() {
            complete = false;
            break;
        }
        let layers = parallel::map(&frontier, |d| {
            expand(d)
                .into_iter()
                .filter(|(_, r)| b.admits(r))
                .filter_map(|(_, r)| canonical_form(&r).ok())
                .collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        'merge: for (c, r) in layers.into_iter().flatten() {
            if visited.contains(&c) {
                continue;
            }
            if !caps.admits(&r, min_c) {
                pruned = true;
                continue;
            }
            if visited.len() >= b.max_states {
                complete = false;
                break 'merge;
            }
            visited.insert(c.clone());
            if keep {
                members.push((c.clone(), r.clone()));
            }
            let k = rank(&r, &c);
            if k < best_rank {
                best_rank = k;
                best = r.clone();
            }
            min_c = min_c.min(r.crossing_count());
            next.push(r);
        }
        let before = next.len();
        next.retain(|r| caps.admits(r, min_c));
        pruned |= next.len() < before;
        frontier = next;
    }
    let (_, _, code) = best_rank;
    let states = visited.len();
    Explored {
        best,
        code,
        complete,
        class: (keep && complete && !pruned).then(|| {
            members.sort_by(|x, y| x.0.cmp(&y.0));
            Arc::new(members)
        }),
        states,
    }
}

const MAX_ROUNDS: usize = 8;

/// Reduces `d` and reports whether the search was exhaustive.
///
/// Greedy reduction is followed by exploration rounds until the chosen
/// state is its own representative, so the output is a fixed point.
pub fn simplify_report(d: &SquareDiagram, b: &SimplifyBudget) -> Result<Simplified> {
    let stop = Stop {
        deadline: b.deadline(),
        cancel: None,
    };
    simplify_until(d, b, &stop)
}

fn simplify_until(d: &SquareDiagram, b: &SimplifyBudget, stop: &Stop) -> Result<Simplified> {
    let (mut code, mut cur) = canonical_form(d)?;
    let mut exhaustive = true;
    let mut states = 0;
    let mut class = None;
    for _ in 0..MAX_ROUNDS {
        let (c2, g) = canonical_form(&greedy(cur.clone(), b))?;
        let (g, c2) = if rank(&g, &c2) < rank(&cur, &code) {
            (g, c2)
        } else {
            (cur.clone(), code.clone())
        };
        if g.crossing_count() == 0 {
            // Zero is a global lower bound: nothing left to explore.
            let s = Simplified {
                diagram: g,
                code: c2,
                exhaustive,
                states: states + 1,
                class,
            };
            return Ok(s);
        }
        let e = explore(g, c2, b, stop);
        exhaustive &= e.complete;
        states += e.states;
        class = e.class;
        if e.code == code {
            break;
        }
        code = e.code;
        cur = e.best;
    }
    Ok(Simplified {
        diagram: cur,
        code,
        exhaustive,
        states,
        class,
    })
}

/// Simplified diagram, in canonical form. Never has more crossings than `d`.
pub fn simplify(d: &SquareDiagram, b: &SimplifyBudget) -> Result<SquareDiagram> {
    simplify_report(d, b).map(|s| s.diagram)
}

/// A search context: a budget plus a cache of simplifications keyed by
/// canonical code, shared by every search run through it.
pub struct Search {
    budget: SimplifyBudget,
    stop: Stop,
    memo: Mutex<HashMap<CanonicalCode, Arc<Simplified>>>,
    progress: Option<Box<ProgressFn>>,
}

type ProgressFn = dyn Fn(&Progress) + Send + Sync;

/// Reported after each change layer of [`Search::untangle_bfs`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub layer: usize,
    /// New states found in this layer.
    pub frontier: usize,
    pub states: usize,
    /// Least simplified crossing count so far.
    pub best: usize,
}

impl Search {
    pub fn new(budget: &SimplifyBudget) -> Self {
        Search {
            budget: *budget,
            stop: Stop {
                deadline: budget.deadline(),
                cancel: None,
            },
            memo: Mutex::new(HashMap::new()),
            progress: None,
        }
    }

    /// Stops the search, as if the budget ran out, once `flag` is set.
    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.stop.cancel = Some(flag);
        self
    }

    pub fn with_progress(mut self, f: impl Fn(&Progress) + Send + Sync + 'static) -> Self {
        self.progress = Some(Box::new(f));
        self
    }

    pub fn budget(&self) -> &SimplifyBudget {
        &self.budget
    }

    /// Cached [`simplify_report`].
    pub fn simplify(&self, d: &SquareDiagram) -> Result<Arc<Simplified>> {
        let (code, canon) = canonical_form(d)?;
        if let Some(s) = self.memo.lock().expect("memo lock").get(&code) {
            return Ok(s.clone());
        }
        let s = Arc::new(simplify_until(&canon, &self.budget, &self.stop)?);
        let mut memo = self.memo.lock().expect("memo lock");
        for (c, _) in s.class.iter().flat_map(|c| c.iter()) {
            memo.insert(c.clone(), s.clone());
        }
        memo.insert(code, s.clone());
        Ok(s)
    }
}

/// Crossing counts after simplifying each diagram of a tridiagram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingBound {
    pub triplet: CrossingTriplet,
    pub exhaustive: [bool; 3],
    #[serde(skip)]
    pub diagrams: Option<Tridiagram>,
}

/// Upper bound on the crossing triplet of the unit cell behind `t`.
pub fn crossing_bound(t: &Tridiagram, b: &SimplifyBudget) -> Result<CrossingBound> {
    let runs = parallel::map3(|a| simplify_report(t.diagram(a), b));
    let [x, y, z] = runs;
    let (x, y, z) = (x?, y?, z?);
    let triplet = CrossingTriplet::new(x.crossings(), y.crossings(), z.crossings());
    let exhaustive = [x.exhaustive, y.exhaustive, z.exhaustive];
    let mut out = Tridiagram::new([x.diagram, y.diagram, z.diagram]);
    out.provenance = t.provenance.clone();
    Ok(CrossingBound {
        triplet,
        exhaustive,
        diagrams: Some(out),
    })
}

/// One untangling operation of a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub axis: Option<Axis>,
    /// Crossing changed. For `Bfs` results this is a node of the canonical
    /// simplified state reached by the previous steps (or of its class
    /// member `at`); for `FixedShadow` results it is a node of the input.
    pub crossing: NodeId,
    pub step: usize,
    /// For `Bfs` results over a fully explored move class: the member of
    /// the class, by code, whose crossing is changed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<CanonicalCode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    FixedShadow,
    Bfs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UntanglingResult {
    pub mode: SearchMode,
    pub budget: SimplifyBudget,
    pub max_changes: usize,
    /// Change layers fully explored.
    pub layers: usize,
    /// The input's triplet slot for its axis (slot `a` if it has none) holds
    /// the least simplified crossing count found.
    pub best_triplet: CrossingTriplet,
    pub min_crossings: usize,
    pub ground_codes: BTreeSet<CanonicalCode>,
    pub input_code: CanonicalCode,
    pub terminal_code: CanonicalCode,
    pub u_upper: usize,
    pub witness: Vec<WitnessStep>,
    pub exhaustive: bool,
    pub states: usize,
}

fn triplet_for(axis: Option<Axis>, n: usize) -> CrossingTriplet {
    let mut v = [0; 3];
    v[axis.map_or(0, Axis::index)] = n;
    CrossingTriplet::new(v[0], v[1], v[2])
}

/// Exhaustive over/under assignments of `d`'s shadow.
pub fn untangle_fixed_shadow(d: &SquareDiagram, b: &SimplifyBudget) -> Result<UntanglingResult> {
    Search::new(b).untangle_fixed_shadow(d)
}

/// Layered search over crossing changes, each followed by simplification.
pub fn untangle_bfs(
    d: &SquareDiagram,
    max_changes: usize,
    b: &SimplifyBudget,
) -> Result<UntanglingResult> {
    Search::new(b).untangle_bfs(d, max_changes)
}

impl Search {
    /// See [`untangle_fixed_shadow`].
    pub fn untangle_fixed_shadow(&self, d: &SquareDiagram) -> Result<UntanglingResult> {
        let (simp, b) = (self, &self.budget);
        let crossings: Vec<NodeId> = d.crossings().collect();
        let n = crossings.len();
        let total = 1usize
            .checked_shl(n as u32)
            .filter(|&t| n < 24 && t <= b.max_states.max(1));
        let Some(total) = total else {
            return Err(Error::Budget(format!(
                "{n} crossings give 2^{n} assignments, more than max_states = {}; use untangle_bfs",
                b.max_states
            )));
        };
        let own = d.assignment();
        let masks: Vec<usize> = (0..total).collect();
        let runs = parallel::map(&masks, |&m| {
            let mut bits = own.clone();
            for (i, bit) in bits.iter_mut().enumerate() {
                if m >> i & 1 == 1 {
                    *bit = bit.flipped();
                }
            }
            simp.simplify(&d.with_assignment(&bits))
        });
        let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
        let min = runs.iter().map(|s| s.crossings()).min().unwrap_or(0);
        let mut best: Option<(u32, &CanonicalCode, usize)> = None;
        let mut ground_codes = BTreeSet::new();
        for (m, s) in runs.iter().enumerate() {
            if s.crossings() != min {
                continue;
            }
            ground_codes.insert(s.code.clone());
            let key = (m.count_ones(), &s.code, m);
            if best.as_ref().is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                best = Some(key);
            }
        }
        let (dist, terminal, mask) = best
            .map(|(d, c, m)| (d as usize, c.clone(), m))
            .expect("at least one assignment");
        let witness = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .enumerate()
            .map(|(step, i)| WitnessStep {
                axis: d.axis,
                crossing: crossings[i],
                step,
                at: None,
            })
            .collect();
        Ok(UntanglingResult {
            mode: SearchMode::FixedShadow,
            budget: *b,
            max_changes: n,
            layers: n,
            best_triplet: triplet_for(d.axis, min),
            min_crossings: min,
            ground_codes,
            input_code: runs[0].code.clone(),
            terminal_code: terminal,
            u_upper: dist,
            witness,
            exhaustive: runs.iter().all(|s| s.exhaustive),
            states: total,
        })
    }

    /// See [`untangle_bfs`].
    pub fn untangle_bfs(&self, d: &SquareDiagram, max_changes: usize) -> Result<UntanglingResult> {
        let (simp, b) = (self, &self.budget);
        let s0 = simp.simplify(d)?;
        // parent[i] = (parent state, class member changed or None for the
        // representative, crossing changed)
        let mut states: Vec<Arc<Simplified>> = vec![s0.clone()];
        let mut parent: Vec<Option<(usize, Option<usize>, NodeId)>> = vec![None];
        let mut layer_of: Vec<usize> = vec![0];
        let mut index: HashMap<CanonicalCode, usize> = HashMap::from([(s0.code.clone(), 0)]);
        let mut min = s0.crossings();
        let mut exhaustive = s0.exhaustive;
        let mut frontier = vec![0usize];
        let mut layers = 0;
        let mut truncated = false;
        for k in 1..=max_changes {
            if min == 0 || frontier.is_empty() {
                break;
            }
            if simp.stop.hit() {
                truncated = true;
                break;
            }
            // A fully explored class is changed at every member, otherwise
            // only at its representative.
            let mut jobs: Vec<(usize, Option<usize>, NodeId)> = Vec::new();
            for &i in &frontier {
                match &states[i].class {
                    Some(class) => {
                        for (j, (_, m)) in class.iter().enumerate() {
                            jobs.extend(m.crossings().map(|x| (i, Some(j), x)));
                        }
                    }
                    None => jobs.extend(states[i].diagram.crossings().map(|x| (i, None, x))),
                }
            }
            let results = parallel::map(&jobs, |&(i, j, x)| {
                let base = match (j, &states[i].class) {
                    (Some(j), Some(class)) => &class[j].1,
                    _ => &states[i].diagram,
                };
                base.crossing_change(x).and_then(|c| simp.simplify(&c))
            });
            let mut next = Vec::new();
            for (&(i, j, x), r) in jobs.iter().zip(results) {
                let s = r?;
                exhaustive &= s.exhaustive;
                if index.contains_key(&s.code) {
                    continue;
                }
                if states.len() >= b.max_states.max(1) {
                    truncated = true;
                    break;
                }
                index.insert(s.code.clone(), states.len());
                min = min.min(s.crossings());
                next.push(states.len());
                states.push(s);
                parent.push(Some((i, j, x)));
                layer_of.push(k);
            }
            layers = k;
            if let Some(f) = &simp.progress {
                f(&Progress {
                    layer: k,
                    frontier: next.len(),
                    states: states.len(),
                    best: min,
                });
            }
            frontier = next;
            if truncated {
                break;
            }
        }
        let closed = frontier.is_empty() || min == 0;
        let ground: Vec<usize> = (0..states.len())
            .filter(|&i| states[i].crossings() == min)
            .collect();
        let target = ground
            .iter()
            .copied()
            .min_by(|&a, &b| (layer_of[a], &states[a].code).cmp(&(layer_of[b], &states[b].code)))
            .expect("input state is counted");
        let mut witness = Vec::new();
        let mut at = target;
        while let Some((p, j, x)) = parent[at] {
            let member = j.and_then(|j| states[p].class.as_ref().map(|c| c[j].0.clone()));
            witness.push((x, member));
            at = p;
        }
        witness.reverse();
        let witness: Vec<WitnessStep> = witness
            .into_iter()
            .enumerate()
            .map(|(step, (x, member))| WitnessStep {
                axis: d.axis,
                crossing: x,
                step,
                at: member,
            })
            .collect();
        Ok(UntanglingResult {
            mode: SearchMode::Bfs,
            budget: *b,
            max_changes,
            layers,
            best_triplet: triplet_for(d.axis, min),
            min_crossings: min,
            ground_codes: ground.iter().map(|&i| states[i].code.clone()).collect(),
            input_code: s0.code.clone(),
            terminal_code: states[target].code.clone(),
            u_upper: layer_of[target],
            witness,
            exhaustive: exhaustive && closed && !truncated,
            states: states.len(),
        })
    }
}

/// Replays a witness from `d` and returns the final state. `Bfs` witnesses
/// are replayed with simplification between steps, as in the search.
pub fn replay(d: &SquareDiagram, r: &UntanglingResult) -> Result<SquareDiagram> {
    match r.mode {
        SearchMode::FixedShadow => {
            let mut cur = d.clone();
            for w in &r.witness {
                cur = cur.crossing_change(w.crossing)?;
            }
            simplify(&cur, &r.budget)
        }
        SearchMode::Bfs => {
            let simp = Search::new(&r.budget);
            let mut cur = simp.simplify(d)?;
            for w in &r.witness {
                let base = match &w.at {
                    None => &cur.diagram,
                    Some(code) => {
                        let class = cur.class.as_ref().ok_or_else(|| {
                            Error::Structure(
                                "witness names a class member, but the class is unknown".into(),
                            )
                        })?;
                        let k = class.binary_search_by(|(c, _)| c.cmp(code)).map_err(|_| {
                            Error::Structure("witness member not in its class".into())
                        })?;
                        &class[k].1
                    }
                };
                let next = simp.simplify(&base.crossing_change(w.crossing)?)?;
                cur = next;
            }
            Ok(cur.diagram.clone())
        }
    }
}

/// Ground-state verdict with the search that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundVerdict {
    pub ground: bool,
    /// False when the verdict is only relative to the budget.
    pub exhaustive: bool,
    pub evidence: UntanglingResult,
}

/// Default number of change layers used by [`is_ground_state`].
pub const GROUND_CHANGES: usize = 2;

pub fn is_ground_state(d: &SquareDiagram, b: &SimplifyBudget) -> Result<GroundVerdict> {
    let r = untangle_bfs(d, GROUND_CHANGES, b)?;
    Ok(GroundVerdict {
        ground: r.u_upper == 0,
        exhaustive: r.exhaustive,
        evidence: r,
    })
}

/// Per-axis untangling of a tridiagram; ground when every axis is.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TridiagramUntangling {
    pub axes: [UntanglingResult; 3],
    pub best_triplet: CrossingTriplet,
    pub ground: bool,
}

pub fn untangle_tridiagram(
    t: &Tridiagram,
    max_changes: usize,
    b: &SimplifyBudget,
) -> Result<TridiagramUntangling> {
    let [x, y, z] = parallel::map3(|a| untangle_bfs(t.diagram(a), max_changes, b));
    let axes = [x?, y?, z?];
    let best_triplet = CrossingTriplet::new(
        axes[0].min_crossings,
        axes[1].min_crossings,
        axes[2].min_crossings,
    );
    let ground = axes.iter().all(|r| r.u_upper == 0);
    Ok(TridiagramUntangling {
        axes,
        best_triplet,
        ground,
    })
}

/// Hard limits for [`brute_oracle`]. States outside them are not entered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCaps {
    pub max_crossings: usize,
    pub max_markers: usize,
    pub max_nodes: usize,
    pub max_punctures: usize,
    pub max_free_loops: u32,
    pub max_states: usize,
}

impl OracleCaps {
    /// Caps a little above the size of `d`.
    pub fn around(d: &SquareDiagram) -> OracleCaps {
        OracleCaps {
            max_crossings: d.crossing_count() + 1,
            max_markers: d.marker_count() + 2,
            max_nodes: d.nodes().len() + 2,
            max_punctures: d.punctures().len() + 2,
            max_free_loops: d.free_loops() + 2,
            max_states: 200_000,
        }
    }

    pub fn admits(&self, d: &SquareDiagram) -> bool {
        d.crossing_count() <= self.max_crossings
            && d.marker_count() <= self.max_markers
            && d.nodes().len() <= self.max_nodes
            && d.punctures().len() <= self.max_punctures
            && d.free_loops() <= self.max_free_loops
    }
}

/// Exact statistics of one state of a [`Closure`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleStats {
    /// Least crossing count in the state's connected part of the closure.
    pub min_crossings: usize,
    /// Least number of crossing changes reaching a state with `min_crossings`.
    pub distance: usize,
    /// Size of the connected part.
    pub states: usize,
}

/// Every diagram reachable from some seeds by moves and crossing changes
/// without leaving the caps, as a graph on canonical codes.
///
/// Plain enumeration, no heuristics; meant as an independent check of the
/// budgeted searches.
pub struct Closure {
    index: HashMap<CanonicalCode, usize>,
    stats: Vec<OracleStats>,
}

impl Closure {
    pub fn build(seeds: &[SquareDiagram], caps: &OracleCaps) -> Result<Closure> {
        let mut index: HashMap<CanonicalCode, usize> = HashMap::new();
        let mut crossings: Vec<usize> = Vec::new();
        // Reversed edges: `free[v]` / `paid[v]` hold the states with a move
        // / crossing change into `v`.
        let mut free: Vec<Vec<u32>> = Vec::new();
        let mut paid: Vec<Vec<u32>> = Vec::new();
        let mut queue: VecDeque<(usize, SquareDiagram)> = VecDeque::new();
        let mut add = |d: SquareDiagram,
                       index: &mut HashMap<CanonicalCode, usize>|
         -> Result<(usize, Option<SquareDiagram>)> {
            let (c, d) = canonical_form(&d)?;
            if let Some(&i) = index.get(&c) {
                return Ok((i, None));
            }
            let i = index.len();
            if i >= caps.max_states {
                return Err(Error::Budget(format!(
                    "oracle closure exceeds {} states",
                    caps.max_states
                )));
            }
            index.insert(c, i);
            crossings.push(d.crossing_count());
            free.push(Vec::new());
            paid.push(Vec::new());
            Ok((i, Some(d)))
        };
        for d in seeds {
            if !caps.admits(d) {
                return Err(Error::Budget("seed exceeds the oracle caps".into()));
            }
            if let (i, Some(d)) = add(d.clone(), &mut index)? {
                queue.push_back((i, d));
            }
        }
        let mut edges: Vec<(usize, usize, bool)> = Vec::new();
        while let Some((i, d)) = queue.pop_front() {
            let moved = expand(&d).into_iter().map(|(_, r)| (r, false));
            let changed = d
                .crossings()
                .map(|x| d.crossing_change(x).map(|r| (r, true)))
                .collect::<Result<Vec<_>>>()?;
            for (r, cost) in moved.chain(changed) {
                if !caps.admits(&r) {
                    continue;
                }
                let (j, fresh) = add(r, &mut index)?;
                if let Some(r) = fresh {
                    queue.push_back((j, r));
                }
                edges.push((i, j, cost));
            }
        }
        for (i, j, cost) in edges {
            let list = if cost { &mut paid } else { &mut free };
            list[j].push(i as u32);
        }
        let stats = Self::solve(&crossings, &free, &paid);
        Ok(Closure { index, stats })
    }

    fn solve(crossings: &[usize], free: &[Vec<u32>], paid: &[Vec<u32>]) -> Vec<OracleStats> {
        let n = crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for v in 0..n {
            for &u in free[v].iter().chain(&paid[v]) {
                let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v));
                parent[a] = b;
            }
        }
        let root: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut min = vec![usize::MAX; n];
        let mut size = vec![0usize; n];
        for v in 0..n {
            min[root[v]] = min[root[v]].min(crossings[v]);
            size[root[v]] += 1;
        }
        // 0-1 search backwards from every minimum state.
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for v in 0..n {
            if crossings[v] == min[root[v]] {
                dist[v] = 0;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for (list, cost) in [(&free[v], 0), (&paid[v], 1)] {
                for &u in list {
                    let u = u as usize;
                    if dist[v] + cost < dist[u] {
                        dist[u] = dist[v] + cost;
                        if cost == 0 {
                            queue.push_front(u);
                        } else {
                            queue.push_back(u);
                        }
                    }
                }
            }
        }
        (0..n)
            .map(|v| OracleStats {
                min_crossings: min[root[v]],
                distance: dist[v],
                states: size[root[v]],
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    /// Statistics of `d`, if it lies in the closure.
    pub fn query(&self, d: &SquareDiagram) -> Result<Option<OracleStats>> {
        let c = crate::code::canonical_code(d)?;
        Ok(self.index.get(&c).map(|&i| self.stats[i].clone()))
    }

    /// Canonical codes of all states, in no particular order.
    pub fn codes(&self) -> impl Iterator<Item = &CanonicalCode> {
        self.index.keys()
    }
}

/// Exact closure statistics of a small diagram under the caps.
pub fn brute_oracle(d: &SquareDiagram, caps: &OracleCaps) -> Result<OracleStats> {
    let closure = Closure::build(std::slice::from_ref(d), caps)?;
    Ok(closure.query(d)?.expect("seed is in its closure"))
}

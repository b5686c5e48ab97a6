//! Sessions: a root document and a tree of states derived from it.

use periodica::format::Document;
use periodica::{
    apply_move, canonical_code, parse, serialize, serialize_tridiagram, validate_diagram, Axis,
    CrossingTriplet, MoveApplication, NodeId, SquareDiagram, Tridiagram,
};
use serde::{Deserialize, Serialize};

/// How a state was derived from its parent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operation {
    Move {
        diagram: usize,
        #[serde(rename = "move")]
        mv: MoveApplication,
    },
    Change {
        diagram: usize,
        crossing: NodeId,
    },
}

#[derive(Clone, Debug)]
pub struct State {
    pub id: usize,
    pub parent: Option<usize>,
    pub op: Option<Operation>,
    /// One diagram, or the three of a tridiagram.
    pub diagrams: Vec<SquareDiagram>,
    /// Provenance line of a tridiagram root, kept for serialisation.
    provenance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub codes: Vec<String>,
    pub crossings: Vec<usize>,
    pub markers: Vec<usize>,
    pub triplet: CrossingTriplet,
    pub valid: bool,
}

impl State {
    fn root(doc: Document) -> State {
        let (diagrams, provenance) = match doc {
            Document::Diagram(d) => (vec![d], None),
            Document::Tridiagram(t) => (t.diagrams.to_vec(), t.provenance),
        };
        State {
            id: 0,
            parent: None,
            op: None,
            diagrams,
            provenance,
        }
    }

    pub fn diagram(&self, i: usize) -> Option<&SquareDiagram> {
        self.diagrams.get(i)
    }

    pub fn pdg(&self) -> String {
        match self.diagrams.as_slice() {
            [d] => serialize(d),
            [a, b, c] => {
                let mut t = Tridiagram::new([a.clone(), b.clone(), c.clone()]);
                t.provenance = self.provenance.clone();
                serialize_tridiagram(&t)
            }
            _ => unreachable!("states hold one or three diagrams"),
        }
    }

    pub fn summary(&self) -> periodica::Result<Summary> {
        let crossings: Vec<usize> = self.diagrams.iter().map(|d| d.crossing_count()).collect();
        let mut slots = [0; 3];
        match self.diagrams.as_slice() {
            [d] => slots[d.axis.map_or(0, Axis::index)] = crossings[0],
            _ => slots.copy_from_slice(&crossings),
        }
        Ok(Summary {
            codes: self
                .diagrams
                .iter()
                .map(|d| canonical_code(d).map(|c| c.to_hex()))
                .collect::<periodica::Result<_>>()?,
            markers: self.diagrams.iter().map(|d| d.marker_count()).collect(),
            triplet: CrossingTriplet::new(slots[0], slots[1], slots[2]),
            valid: self.diagrams.iter().all(|d| validate_diagram(d).is_valid()),
            crossings,
        })
    }
}

/// Applies `op` to the given diagram of `parent`.
pub fn derive(parent: &State, op: &Operation) -> periodica::Result<Vec<SquareDiagram>> {
    let i = match op {
        Operation::Move { diagram, .. } | Operation::Change { diagram, .. } => *diagram,
    };
    let d = parent.diagram(i).ok_or_else(|| no_diagram(i))?;
    let mut next = match op {
        Operation::Move { mv, .. } => apply_move(d, mv)?,
        Operation::Change { crossing, .. } => d.crossing_change(*crossing)?,
    };
    next.axis = d.axis;
    let mut out = parent.diagrams.clone();
    out[i] = next;
    Ok(out)
}

fn no_diagram(i: usize) -> periodica::Error {
    periodica::Error::NotApplicable(format!("state has no diagram {i}"))
}

#[derive(Clone, Debug)]
pub struct Session {
    pub id: u64,
    pub states: Vec<State>,
}

impl Session {
    pub fn new(id: u64, pdg: &str) -> periodica::Result<Session> {
        let doc = parse(pdg)?;
        let diagrams: Vec<&SquareDiagram> = match &doc {
            Document::Diagram(d) => vec![d],
            Document::Tridiagram(t) => t.diagrams.iter().collect(),
        };
        for d in diagrams {
            let r = validate_diagram(d);
            if !r.is_valid() {
                return Err(periodica::Error::Structure(format!(
                    "invalid diagram: rules {:?} {:?}",
                    r.violated_rules(),
                    r.structural
                )));
            }
        }
        Ok(Session {
            id,
            states: vec![State::root(doc)],
        })
    }

    pub fn state(&self, sid: usize) -> Option<&State> {
        self.states.get(sid)
    }

    /// Appends the child of `sid` reached by `op` and returns its id.
    pub fn apply(&mut self, sid: usize, op: Operation) -> periodica::Result<usize> {
        let parent = &self.states[sid];
        let diagrams = derive(parent, &op)?;
        let id = self.states.len();
        self.states.push(State {
            id,
            parent: Some(sid),
            op: Some(op),
            diagrams,
            provenance: parent.provenance.clone(),
        });
        Ok(id)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            id: self.id,
            root: self.states[0].pdg(),
            steps: self
                .states
                .iter()
                .skip(1)
                .map(|s| (s.parent.expect("non-root"), s.op.clone().expect("non-root")))
                .collect(),
        }
    }

    /// Rebuilds a session by replaying its recorded operations.
    pub fn restore(s: &Snapshot) -> periodica::Result<Session> {
        let mut out = Session::new(s.id, &s.root)?;
        for (parent, op) in &s.steps {
            if *parent >= out.states.len() {
                return Err(periodica::Error::Structure(
                    "snapshot parent out of order".into(),
                ));
            }
            out.apply(*parent, op.clone())?;
        }
        Ok(out)
    }
}

/// On-disk form of a session: the root document and the operations, in
/// order. States are recomputed on load, so the history invariant holds by
/// construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub id: u64,
    pub root: String,
    pub steps: Vec<(usize, Operation)>,
}

//! Combinatorial engine for diagrams of 3-periodic tangled networks.
//!
//! A unit cell of a periodic graph embedding is projected along each of the
//! three cell axes onto a square with identified edges, giving a
//! [`Tridiagram`] of three [`SquareDiagram`]s. Diagrams are rewritten with
//! the thirteen R-moves of [`moves`], and [`search`] bounds crossing numbers
//! and untangling numbers by exploring crossing changes.

pub mod code;
pub mod diagram;
pub mod format;
pub mod map;
pub mod moves;
pub mod net;
pub mod parallel;
pub mod projection;
pub mod render;
pub mod search;
pub mod strands;
pub mod tridiagram;
pub mod validate;

pub use code::{canonical_code, canonical_form, shadow_code, CanonicalCode};
pub use diagram::{Axis, End, Node, NodeId, NodeKind, OverPair, Puncture, Side, SquareDiagram};
pub use format::{
    parse, parse_diagram, parse_tridiagram, serialize, serialize_tridiagram, Document,
};
pub use moves::{apply_move, enumerate_moves, MoveApplication, MoveKind};
pub use net::{load_net, PeriodicEmbedding};
pub use search::{SimplifyBudget, UntanglingResult};
pub use strands::{strands, Strand};
pub use tridiagram::{CrossingTriplet, Tridiagram};
pub use validate::{validate_diagram, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("malformed diagram: {0}")]
    Structure(String),
    #[error("node {0} is not a crossing")]
    NotACrossing(NodeId),
    #[error("move not applicable: {0}")]
    NotApplicable(String),
    #[error("net line {line}: {msg}")]
    Net { line: usize, msg: String },
    #[error("no generic position after {tries} tries; first violation: rule {rule} ({detail})")]
    Genericity {
        tries: u32,
        rule: u8,
        detail: String,
    },
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! The move catalogue: small pattern/result diagram pairs, one or more per
//! move kind, shipped as `data/catalogue.pdg`.
//!
//! ```text
//! @move R1 forward curl
//! pdg 1
//! ...
//! @result
//! pdg 1
//! ...
//! ```
//!
//! Each entry is checked by [`CatalogueEntry::realised`]: some enumerated
//! move of that kind and direction must turn the pattern into the result.

use std::sync::OnceLock;

use super::{expand, Direction, MoveKind};
use crate::code::canonical_code;
use crate::diagram::SquareDiagram;
use crate::format::parse_diagram;
use crate::{Error, Result};

pub const CATALOGUE_TEXT: &str = include_str!("../../data/catalogue.pdg");

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub kind: MoveKind,
    pub direction: Direction,
    pub name: String,
    pub pattern: SquareDiagram,
    pub result: SquareDiagram,
}

impl CatalogueEntry {
    /// Whether the engine produces `result` from `pattern` with one move of
    /// the entry's kind and direction.
    pub fn realised(&self) -> bool {
        let Ok(want) = canonical_code(&self.result) else {
            return false;
        };
        expand(&self.pattern).into_iter().any(|(m, r)| {
            m.kind == self.kind
                && m.direction == self.direction
                && canonical_code(&r).is_ok_and(|c| c == want)
        })
    }
}

pub fn parse_catalogue(text: &str) -> Result<Vec<CatalogueEntry>> {
    let mut out = Vec::new();
    let mut header: Option<(usize, &str)> = None;
    let mut pattern = String::new();
    let mut result = String::new();
    let mut in_result = false;
    let finish = |header: Option<(usize, &str)>,
                  pattern: &str,
                  result: &str,
                  out: &mut Vec<CatalogueEntry>| {
        let Some((line, h)) = header else {
            return Ok(());
        };
        let bad = |msg: &str| Error::Syntax {
            line,
            msg: msg.to_string(),
        };
        let mut words = h.split_whitespace();
        let kind = words
            .next()
            .and_then(|w| w.strip_prefix('R'))
            .and_then(|n| n.parse().ok())
            .and_then(MoveKind::from_number)
            .ok_or_else(|| bad("expected a move kind R1..R13"))?;
        let direction = match words.next() {
            Some("forward") => Direction::Forward,
            Some("backward") => Direction::Backward,
            _ => return Err(bad("expected forward or backward")),
        };
        let name = words.collect::<Vec<_>>().join(" ");
        let pattern = parse_diagram(pattern).map_err(|e| bad(&format!("pattern: {e}")))?;
        let result = parse_diagram(result).map_err(|e| bad(&format!("result: {e}")))?;
        out.push(CatalogueEntry {
            kind,
            direction,
            name,
            pattern,
            result,
        });
        Ok(())
    };
    for (n, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix("@move ") {
            finish(header, &pattern, &result, &mut out)?;
            header = Some((n + 1, rest));
            pattern.clear();
            result.clear();
            in_result = false;
        } else if line.trim() == "@result" {
            in_result = true;
        } else if header.is_some() {
            let buf = if in_result { &mut result } else { &mut pattern };
            buf.push_str(line);
            buf.push('\n');
        }
    }
    finish(header, &pattern, &result, &mut out)?;
    Ok(out)
}

/// The shipped catalogue, parsed once.
pub fn catalogue() -> &'static [CatalogueEntry] {
    static CAT: OnceLock<Vec<CatalogueEntry>> = OnceLock::new();
    CAT.get_or_init(|| parse_catalogue(CATALOGUE_TEXT).expect("shipped catalogue parses"))
}

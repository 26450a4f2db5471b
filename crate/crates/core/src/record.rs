//! Provenance of a translation: which variables are original atoms, which
//! were introduced and why, and how the objective was flattened.
//!
//! The record is written next to the OPB file as a line-oriented sidecar:
//!
//! ```text
//! asp2pb-record 1
//! num_vars <N>
//! min_order first|last
//! objective_offset <k>
//! original <id>
//! symbol <id> <name...>
//! fresh <id> <role>
//! level <priority> <multiplier> <max_value>
//! ```
//!
//! `original`, `symbol` and `fresh` lines are ordered by atom id; `level`
//! lines go from the most to the least significant level. Blank lines and
//! lines starting with `#` are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::pb::{MinOrder, ObjectiveLevel};
use crate::program::{Atom, Int};

const HEADER: &str = "asp2pb-record 1";

/// Why a fresh atom was introduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// `h'` in `h' <- W; h <- h'` when a weight-rule head had other rules.
    IsolatedHead,
    /// The complement atom of a split aggregate guard.
    GuardComplement,
    /// Stands for a conjunctive rule body.
    BodyAux,
    /// One bit of a binary-encoded level.
    LevelBit,
    /// Defined flag for a level comparison or a ranking disjunct.
    FlagAux,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::IsolatedHead => "isolated-head",
            Role::GuardComplement => "guard-complement",
            Role::BodyAux => "body-aux",
            Role::LevelBit => "level-bit",
            Role::FlagAux => "flag-aux",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "isolated-head" => Role::IsolatedHead,
            "guard-complement" => Role::GuardComplement,
            "body-aux" => Role::BodyAux,
            "level-bit" => Role::LevelBit,
            "flag-aux" => Role::FlagAux,
            _ => return Err(()),
        })
    }
}

/// Allocates consecutive atoms above a fixed id and remembers their roles.
#[derive(Clone, Debug)]
pub struct FreshAtoms {
    first: u32,
    next: u32,
    registry: Vec<(Atom, Role)>,
}

impl FreshAtoms {
    pub fn above(max_atom: u32) -> Self {
        FreshAtoms {
            first: max_atom + 1,
            next: max_atom + 1,
            registry: Vec::new(),
        }
    }

    pub fn fresh(&mut self, role: Role) -> Atom {
        let atom = Atom::new(self.next);
        self.next += 1;
        self.registry.push((atom, role));
        atom
    }

    /// Highest id handed out so far (or the base if none).
    pub fn max_atom(&self) -> u32 {
        self.next - 1
    }

    pub fn first(&self) -> u32 {
        self.first
    }

    pub fn registry(&self) -> &[(Atom, Role)] {
        &self.registry
    }

    pub fn role_of(&self, atom: Atom) -> Option<Role> {
        if atom.id() < self.first || atom.id() >= self.next {
            return None;
        }
        Some(self.registry[(atom.id() - self.first) as usize].1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationRecord {
    pub num_vars: u32,
    pub original_atoms: BTreeSet<Atom>,
    pub symbols: BTreeMap<Atom, String>,
    pub fresh: BTreeMap<Atom, Role>,
    /// Most significant first.
    pub levels: Vec<ObjectiveLevel>,
    /// Constant dropped from the written objective; the flattened value is
    /// the solver's objective value plus this offset.
    pub objective_offset: Int,
    pub min_order: MinOrder,
}

impl Default for TranslationRecord {
    fn default() -> Self {
        TranslationRecord {
            num_vars: 0,
            original_atoms: BTreeSet::new(),
            symbols: BTreeMap::new(),
            fresh: BTreeMap::new(),
            levels: Vec::new(),
            objective_offset: Int::from(0),
            min_order: MinOrder::default(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecordError {
    #[error("not a translation record (missing `{HEADER}` header)")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

impl TranslationRecord {
    pub fn to_sidecar(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{HEADER}").unwrap();
        writeln!(out, "num_vars {}", self.num_vars).unwrap();
        writeln!(out, "min_order {}", self.min_order.as_str()).unwrap();
        writeln!(out, "objective_offset {}", self.objective_offset).unwrap();
        for atom in &self.original_atoms {
            writeln!(out, "original {atom}").unwrap();
        }
        for (atom, name) in &self.symbols {
            writeln!(out, "symbol {atom} {name}").unwrap();
        }
        for (atom, role) in &self.fresh {
            writeln!(out, "fresh {atom} {role}").unwrap();
        }
        for level in &self.levels {
            writeln!(
                out,
                "level {} {} {}",
                level.priority, level.multiplier, level.max_value
            )
            .unwrap();
        }
        out
    }

    pub fn from_sidecar(text: &str) -> Result<Self, RecordError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, HEADER)) => {}
            _ => return Err(RecordError::MissingHeader),
        }
        let mut record = TranslationRecord::default();
        for (line, text) in lines {
            let bad = |message: &str| RecordError::Malformed {
                line,
                message: message.to_owned(),
            };
            let (key, rest) = text.split_once(' ').unwrap_or((text, ""));
            let rest = rest.trim_start();
            let atom = |s: &str| {
                s.parse::<u32>()
                    .ok()
                    .and_then(Atom::try_new)
                    .ok_or_else(|| bad("expected an atom id"))
            };
            match key {
                "num_vars" => {
                    record.num_vars = rest.parse().map_err(|_| bad("expected a count"))?;
                }
                "min_order" => {
                    record.min_order = rest.parse().map_err(|e: String| bad(&e))?;
                }
                "objective_offset" => {
                    record.objective_offset =
                        rest.parse().map_err(|_| bad("expected an integer"))?;
                }
                "original" => {
                    record.original_atoms.insert(atom(rest)?);
                }
                "symbol" => {
                    let (id, name) = rest
                        .split_once(' ')
                        .ok_or_else(|| bad("expected `symbol <id> <name>`"))?;
                    record.symbols.insert(atom(id)?, name.to_owned());
                }
                "fresh" => {
                    let (id, role) = rest
                        .split_once(' ')
                        .ok_or_else(|| bad("expected `fresh <id> <role>`"))?;
                    let role = role.trim().parse().map_err(|_| bad("unknown role"))?;
                    record.fresh.insert(atom(id)?, role);
                }
                "level" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [priority, multiplier, max_value] = parts[..] else {
                        return Err(bad("expected `level <priority> <multiplier> <max>`"));
                    };
                    record.levels.push(ObjectiveLevel {
                        priority: priority.parse().map_err(|_| bad("bad priority"))?,
                        multiplier: multiplier.parse().map_err(|_| bad("bad multiplier"))?,
                        max_value: max_value.parse().map_err(|_| bad("bad max value"))?,
                    });
                }
                _ => return Err(bad("unknown key")),
            }
        }
        Ok(record)
    }
}

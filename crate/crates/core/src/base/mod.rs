//! Translation of an aggregate-free program into PB constraints whose
//! models correspond one-to-one to the program's stable models.
//!
//! Tight parts are handled by Clark completion. Atoms on positive cycles
//! additionally get a level, stored as a little-endian binary number in
//! fresh bit variables, and ranking constraints that only admit levels
//! matching a well-founded derivation. Level comparisons such as
//! `L(a) >= L(b) + 1` are single linear constraints over the bits, guarded
//! by a big-M literal, so no sorting network or CNF comparator is needed.
//!
//! Every fresh variable (body auxiliaries, level bits, comparison and
//! disjunct flags) is defined by a two-sided equivalence, so each stable
//! model has exactly one extension to a PB model.

mod ranking;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Not;

pub use ranking::{
    level_of, ranking_constraints, LevelEncoder, LevelVars, LoopComponent, RankingRegistry,
    RankingScheme, StrongRanking, WeakRanking,
};

use crate::pb::{clause_to_pb, normalize, PbConstraint};
use crate::program::{Atom, DependencyGraph, Literal, Program, Rule};
use crate::record::{FreshAtoms, Role};

/// Truth condition of a rule body after auxiliary substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cond {
    True,
    False,
    Lit(Literal),
}

impl Not for Cond {
    type Output = Cond;

    fn not(self) -> Cond {
        match self {
            Cond::True => Cond::False,
            Cond::False => Cond::True,
            Cond::Lit(l) => Cond::Lit(!l),
        }
    }
}

impl From<Literal> for Cond {
    fn from(l: Literal) -> Self {
        Cond::Lit(l)
    }
}

/// Simplifies a disjunction of conditions: `None` if it is trivially true,
/// otherwise the remaining literals.
pub fn clause_of(conds: impl IntoIterator<Item = Cond>) -> Option<Vec<Literal>> {
    let mut lits = Vec::new();
    for c in conds {
        match c {
            Cond::True => return None,
            Cond::False => {}
            Cond::Lit(l) => {
                if lits.contains(&!l) {
                    return None;
                }
                if !lits.contains(&l) {
                    lits.push(l);
                }
            }
        }
    }
    Some(lits)
}

/// A fresh atom standing for a conjunctive body of two or more literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyAux {
    pub atom: Atom,
    pub body: Vec<Literal>,
}

#[derive(Clone, Debug, Default)]
pub struct BodyTable {
    pub auxes: Vec<BodyAux>,
    by_body: BTreeMap<Vec<Literal>, Atom>,
}

impl BodyTable {
    fn cond(
        &mut self,
        body: &[Literal],
        fresh: &mut FreshAtoms,
        clauses: &mut Vec<Vec<Literal>>,
    ) -> Cond {
        let key = body_key(body);
        if key.windows(2).any(|w| w[0].atom == w[1].atom) {
            return Cond::False;
        }
        match key.len() {
            0 => Cond::True,
            1 => Cond::Lit(key[0]),
            _ => {
                if let Some(&atom) = self.by_body.get(&key) {
                    return Cond::Lit(atom.pos());
                }
                let atom = fresh.fresh(Role::BodyAux);
                for &l in &key {
                    clauses.push(vec![atom.neg(), l]);
                }
                let mut back: Vec<Literal> = key.iter().map(|&l| !l).collect();
                back.push(atom.pos());
                clauses.push(back);
                self.by_body.insert(key.clone(), atom);
                self.auxes.push(BodyAux { atom, body: key });
                Cond::Lit(atom.pos())
            }
        }
    }
}

/// Sorted, deduplicated body literals.
fn body_key(body: &[Literal]) -> Vec<Literal> {
    let mut key = body.to_vec();
    key.sort();
    key.dedup();
    key
}

/// One rule (basic or choice) defining an atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub cond: Cond,
    /// Positive body atoms.
    pub positive: Vec<Atom>,
    /// Choice rules support their heads but never force them.
    pub choice: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Completion {
    pub clauses: Vec<Vec<Literal>>,
    pub bodies: BodyTable,
    /// Defining rules per atom, in rule order.
    pub definitions: BTreeMap<Atom, Vec<Definition>>,
    /// The rules that survived the unused-atom shortcut.
    pub effective: Program,
}

/// Head atoms nobody else can observe: not visible, unnamed, outside the
/// compute statements and absent from every body. The base translation
/// simply falsifies them.
fn unobservable_atoms(base: &Program, visible: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    let mut in_body = BTreeSet::new();
    for rule in &base.rules {
        in_body.extend(rule.body_literals().map(|l| l.atom));
    }
    base.rules
        .iter()
        .flat_map(|r| r.heads().iter().copied())
        .filter(|h| {
            !visible.contains(h)
                && !base.symbols.contains_key(h)
                && !base.compute_true.contains(h)
                && !base.compute_false.contains(h)
                && !in_body.contains(h)
        })
        .collect()
}

/// Clark completion of a disjunction- and aggregate-free program.
///
/// # Panics
///
/// Panics on weight rules, minimize statements or disjunctive rules.
pub fn completion(base: &Program, visible: &BTreeSet<Atom>, fresh: &mut FreshAtoms) -> Completion {
    let hidden = unobservable_atoms(base, visible);
    let mut out = Completion {
        effective: Program {
            rules: Vec::new(),
            ..base.clone()
        },
        ..Default::default()
    };

    for rule in &base.rules {
        let (heads, body, choice) = match rule {
            Rule::Basic(r) => (vec![r.head], &r.body, false),
            Rule::Choice(r) => (r.heads.clone(), &r.body, true),
            _ => panic!("completion expects a split, shifted program"),
        };
        let heads: Vec<Atom> = heads.into_iter().filter(|h| !hidden.contains(h)).collect();
        if heads.is_empty() {
            continue;
        }
        out.effective.rules.push(if choice {
            Rule::choice(heads.clone(), body.clone())
        } else {
            Rule::basic(heads[0], body.clone())
        });
        let cond = out.bodies.cond(body, fresh, &mut out.clauses);
        let positive: Vec<Atom> = body_key(body)
            .into_iter()
            .filter(|l| !l.negated)
            .map(|l| l.atom)
            .collect();
        for h in heads {
            out.definitions.entry(h).or_default().push(Definition {
                cond,
                positive: positive.clone(),
                choice,
            });
        }
    }

    let mut vocabulary = base.atoms();
    vocabulary.extend(visible.iter().copied());
    for &atom in &vocabulary {
        if hidden.contains(&atom) {
            out.clauses.push(vec![atom.neg()]);
            continue;
        }
        let defs = out.definitions.get(&atom).map(Vec::as_slice).unwrap_or(&[]);
        for d in defs.iter().filter(|d| !d.choice) {
            if let Some(c) = clause_of([!d.cond, Cond::Lit(atom.pos())]) {
                out.clauses.push(c);
            }
        }
        let support = std::iter::once(Cond::Lit(atom.neg())).chain(defs.iter().map(|d| d.cond));
        if let Some(c) = clause_of(support) {
            out.clauses.push(c);
        }
    }
    for &atom in &base.compute_true {
        out.clauses.push(vec![atom.pos()]);
    }
    for &atom in &base.compute_false {
        out.clauses.push(vec![atom.neg()]);
    }
    out
}

#[derive(Clone, Debug)]
pub struct BaseTranslation {
    pub constraints: Vec<PbConstraint>,
    pub bodies: BodyTable,
    pub levels: LevelVars,
}

/// Completion plus ranking, as normalized PB constraints.
pub fn translate_base(
    base: &Program,
    visible: &BTreeSet<Atom>,
    fresh: &mut FreshAtoms,
    scheme: &dyn RankingScheme,
) -> BaseTranslation {
    let completion = completion(base, visible, fresh);
    let graph = DependencyGraph::build(&completion.effective);
    let mut constraints: Vec<PbConstraint> = completion
        .clauses
        .iter()
        .map(|c| normalize(&clause_to_pb(c)))
        .collect();
    let ranking = ranking_constraints(&completion, &graph, fresh, scheme);
    constraints.extend(ranking.constraints);
    BaseTranslation {
        constraints,
        bodies: completion.bodies,
        levels: ranking.levels,
    }
}

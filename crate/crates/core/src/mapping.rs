//! From PB solver answers back to answer sets of the original program.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::opb::SolverOutput;
use crate::pb::ObjectiveLevel;
use crate::program::{
    check_no_recursive_aggregates, Atom, DependencyGraph, Int, Program, RecursiveAggregate, Rule,
};
use crate::record::{FreshAtoms, Role, TranslationRecord};
use crate::transform::{isolate_weight_heads, shift_disjunctive, split_aggregates, TransformError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MappingError {
    #[error("solver output carries no assignment")]
    NoAssignment,
    #[error("assignment does not mention variable x{0}")]
    MissingVariable(Atom),
    #[error("objective value {value} exceeds the largest encodable value {max}")]
    ObjectiveOutOfRange { value: Int, max: Int },
    #[error("objective value {0} is negative")]
    NegativeObjective(Int),
    #[error("candidate mentions atom {0}, which the program does not")]
    UnknownAtom(Atom),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    RecursiveAggregate(#[from] RecursiveAggregate),
}

/// The original atoms that are true in a solver answer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnswerSet {
    pub atoms: BTreeSet<Atom>,
    /// Symbol-table names of the true atoms.
    pub named: BTreeSet<String>,
    /// True atoms without a name.
    pub unnamed: BTreeSet<Atom>,
}

impl AnswerSet {
    /// Names, plus `#<id>` for unnamed atoms when asked for.
    pub fn render(&self, include_unnamed: bool) -> Vec<String> {
        let mut out: Vec<String> = self.named.iter().cloned().collect();
        if include_unnamed {
            out.extend(self.unnamed.iter().map(|a| format!("#{a}")));
        }
        out
    }
}

pub fn to_answer_set(
    out: &SolverOutput,
    rec: &TranslationRecord,
) -> Result<AnswerSet, MappingError> {
    let assignment = out.assignment.as_ref().ok_or(MappingError::NoAssignment)?;
    let mut answer = AnswerSet::default();
    for &atom in &rec.original_atoms {
        let value = *assignment
            .get(&atom)
            .ok_or(MappingError::MissingVariable(atom))?;
        if !value {
            continue;
        }
        answer.atoms.insert(atom);
        match rec.symbols.get(&atom) {
            Some(name) => {
                answer.named.insert(name.clone());
            }
            None => {
                answer.unnamed.insert(atom);
            }
        }
    }
    Ok(answer)
}

/// Splits a flattened objective value into per-level values, most
/// significant level first.
pub fn decode_objective(
    value: &Int,
    levels: &[ObjectiveLevel],
) -> Result<Vec<(usize, Int)>, MappingError> {
    if value.is_negative() {
        return Err(MappingError::NegativeObjective(value.clone()));
    }
    let max: Int = levels.iter().map(|l| &l.multiplier * &l.max_value).sum();
    if value > &max {
        return Err(MappingError::ObjectiveOutOfRange {
            value: value.clone(),
            max,
        });
    }
    let mut rest = value.clone();
    let mut out = Vec::with_capacity(levels.len());
    for level in levels {
        let v = if level.multiplier.is_zero() {
            Int::zero()
        } else {
            &rest / &level.multiplier
        };
        rest -= &v * &level.multiplier;
        out.push((level.priority, v));
    }
    Ok(out)
}

/// Least model of the reduct of a basic/choice program w.r.t. `candidate`.
fn reduct_least_model(program: &Program, candidate: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    // (head, positive body) pairs surviving the reduct
    let mut rules: Vec<(Atom, Vec<Atom>)> = Vec::new();
    for rule in &program.rules {
        let (heads, body): (Vec<Atom>, _) = match rule {
            Rule::Basic(r) => (vec![r.head], &r.body),
            Rule::Choice(r) => (
                r.heads
                    .iter()
                    .copied()
                    .filter(|h| candidate.contains(h))
                    .collect(),
                &r.body,
            ),
            _ => unreachable!("reduct of a split program"),
        };
        if body
            .iter()
            .any(|l| l.negated && candidate.contains(&l.atom))
        {
            continue;
        }
        let positive: Vec<Atom> = body.iter().filter(|l| !l.negated).map(|l| l.atom).collect();
        for h in heads {
            rules.push((h, positive.clone()));
        }
    }
    let mut model = BTreeSet::new();
    loop {
        let before = model.len();
        for (head, body) in &rules {
            if !model.contains(head) && body.iter().all(|b| model.contains(b)) {
                model.insert(*head);
            }
        }
        if model.len() == before {
            return model;
        }
    }
}

/// Whether `candidate` (a set of original atoms) is a stable model.
///
/// Works on the split form of the program: the aggregate guards must agree
/// with their bodies, and the extended candidate must be the least model of
/// the reduct of the aggregate-free part.
pub fn check_stable(program: &Program, candidate: &BTreeSet<Atom>) -> Result<bool, MappingError> {
    let vocabulary = program.atoms();
    if let Some(&unknown) = candidate.iter().find(|a| !vocabulary.contains(a)) {
        return Err(MappingError::UnknownAtom(unknown));
    }
    let graph = DependencyGraph::build(program);
    check_no_recursive_aggregates(program, &graph)?;
    let shifted = shift_disjunctive(program, &graph)?;
    let mut fresh = FreshAtoms::above(shifted.max_atom);
    let isolated = isolate_weight_heads(&shifted, &mut fresh);
    let split = split_aggregates(&isolated, fresh);

    if program.compute_true.iter().any(|a| !candidate.contains(a))
        || program.compute_false.iter().any(|a| candidate.contains(a))
    {
        return Ok(false);
    }

    // Isolated heads take the value of their aggregate; guard complements
    // the negation of their guard.
    let mut extended = candidate.clone();
    let bodies: BTreeMap<Atom, &crate::transform::EquivConstraint> =
        split.equivalences.iter().map(|e| (e.guard, e)).collect();
    for &(atom, role) in split.fresh.registry() {
        if role == Role::IsolatedHead && bodies[&atom].body_holds(|x| candidate.contains(&x)) {
            extended.insert(atom);
        }
    }
    for eq in &split.equivalences {
        if eq.body_holds(|x| extended.contains(&x)) != extended.contains(&eq.guard) {
            return Ok(false);
        }
    }
    for rule in &split.base.rules {
        if let Rule::Basic(r) = rule {
            if split.fresh.role_of(r.head) == Some(Role::GuardComplement) {
                // complement <- ~guard
                if !extended.contains(&r.body[0].atom) {
                    extended.insert(r.head);
                }
            }
        }
    }
    Ok(reduct_least_model(&split.base, &extended) == extended)
}

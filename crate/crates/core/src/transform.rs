//! Program-to-program rewrites that run before the base translation.
//!
//! The order is fixed: [`shift_disjunctive`], [`isolate_weight_heads`],
//! [`split_aggregates`], [`cwa_register`]. After splitting, every weight
//! rule `h <- W` has become the pair `h <- ~h'`, `h' <- ~h` in the base
//! program plus a pending [`EquivConstraint`] `h <=> W`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::program::{
    Atom, DependencyGraph, Int, MinimizeStatement, Program, Rule, WeightedLiteral,
};
use crate::record::{FreshAtoms, Role};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("disjunctive rule {rule_index} is not head-cycle-free: atoms {first} and {second} share a positive cycle")]
    NotHeadCycleFree {
        rule_index: usize,
        first: Atom,
        second: Atom,
    },
}

/// `guard <=> bound <= sum(w_i * l_i)`, waiting to be big-M encoded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivConstraint {
    pub guard: Atom,
    pub bound: Int,
    pub terms: Vec<WeightedLiteral>,
}

impl EquivConstraint {
    pub fn body_holds<F: Fn(Atom) -> bool>(&self, value: F) -> bool {
        let sum: Int = self
            .terms
            .iter()
            .filter(|t| t.literal.eval(value(t.literal.atom)))
            .map(|t| &t.weight)
            .sum();
        sum >= self.bound
    }
}

#[derive(Clone, Debug)]
pub struct SplitResult {
    /// Aggregate-free, disjunction-free and without minimize statements.
    pub base: Program,
    pub equivalences: Vec<EquivConstraint>,
    pub minimize: Vec<MinimizeStatement>,
    pub fresh: FreshAtoms,
    /// Atoms the base translation must keep and may not simplify away.
    pub visible: BTreeSet<Atom>,
}

/// Replaces every disjunctive rule by one rule per head atom, moving the
/// other head atoms into the body as negative literals.
pub fn shift_disjunctive(
    program: &Program,
    graph: &DependencyGraph,
) -> Result<Program, TransformError> {
    if !program.has_disjunction() {
        return Ok(program.clone());
    }
    let mut shifted = Program {
        rules: Vec::with_capacity(program.rules.len()),
        ..program.clone()
    };
    for (rule_index, rule) in program.rules.iter().enumerate() {
        let Rule::Disjunctive(d) = rule else {
            shifted.rules.push(rule.clone());
            continue;
        };
        for (i, &first) in d.heads.iter().enumerate() {
            for &second in &d.heads[i + 1..] {
                if first != second && graph.same_scc(first, second) {
                    return Err(TransformError::NotHeadCycleFree {
                        rule_index,
                        first,
                        second,
                    });
                }
            }
        }
        let mut heads = d.heads.clone();
        heads.sort();
        heads.dedup();
        for &head in &heads {
            let mut body = d.body.clone();
            body.extend(heads.iter().filter(|&&h| h != head).map(|h| h.neg()));
            shifted.rules.push(Rule::basic(head, body));
        }
    }
    Ok(shifted)
}

/// Gives every weight rule a head that no other rule defines: when `h`
/// has other rules, `h <- W` becomes `h' <- W; h <- h'` with `h'` fresh.
pub fn isolate_weight_heads(program: &Program, fresh: &mut FreshAtoms) -> Program {
    let mut defining: BTreeMap<Atom, usize> = BTreeMap::new();
    for rule in &program.rules {
        let mut heads: Vec<Atom> = rule.heads().to_vec();
        heads.sort();
        heads.dedup();
        for h in heads {
            *defining.entry(h).or_default() += 1;
        }
    }

    let mut out = Program {
        rules: Vec::with_capacity(program.rules.len()),
        ..program.clone()
    };
    for rule in &program.rules {
        match rule {
            Rule::Weight(w) if defining[&w.head] > 1 => {
                let isolated = fresh.fresh(Role::IsolatedHead);
                let mut moved = w.clone();
                moved.head = isolated;
                out.push(Rule::Weight(moved));
                out.push(Rule::basic(w.head, vec![isolated.pos()]));
            }
            other => out.rules.push(other.clone()),
        }
    }
    out.max_atom = out.max_atom.max(fresh.max_atom());
    out
}

/// Sums the weights of repeated literals, keeping first-occurrence order.
fn merge_terms(terms: &[WeightedLiteral]) -> Vec<WeightedLiteral> {
    let mut merged: Vec<WeightedLiteral> = Vec::with_capacity(terms.len());
    for t in terms {
        match merged.iter_mut().find(|m| m.literal == t.literal) {
            Some(m) => m.weight += &t.weight,
            None => merged.push(t.clone()),
        }
    }
    merged
}

/// Removes every weight rule and minimize statement from the program.
///
/// # Panics
///
/// Panics if the program still contains disjunctive rules.
pub fn split_aggregates(program: &Program, mut fresh: FreshAtoms) -> SplitResult {
    let mut base = Program {
        rules: Vec::with_capacity(program.rules.len()),
        ..program.clone()
    };
    let mut equivalences = Vec::new();
    let mut minimize = Vec::new();
    for rule in &program.rules {
        match rule {
            Rule::Weight(w) => {
                let complement = fresh.fresh(Role::GuardComplement);
                base.push(Rule::basic(w.head, vec![complement.neg()]));
                base.push(Rule::basic(complement, vec![w.head.neg()]));
                equivalences.push(EquivConstraint {
                    guard: w.head,
                    bound: w.bound.clone(),
                    terms: merge_terms(&w.terms),
                });
            }
            Rule::Minimize(m) => minimize.push(MinimizeStatement {
                priority: m.priority,
                terms: merge_terms(&m.terms),
            }),
            Rule::Disjunctive(_) => panic!("split_aggregates needs a shifted program"),
            other => base.rules.push(other.clone()),
        }
    }
    base.max_atom = base.max_atom.max(fresh.max_atom());
    SplitResult {
        base,
        equivalences,
        minimize,
        fresh,
        visible: BTreeSet::new(),
    }
}

/// Marks every atom the PB side still refers to as visible to the base
/// translation: atoms of the base program, and atoms that now only occur in
/// equivalence or minimize terms. The latter have no rules left and so get
/// forced false by completion instead of floating free.
pub fn cwa_register(mut split: SplitResult) -> SplitResult {
    let mut visible = split.base.rule_atoms();
    for eq in &split.equivalences {
        visible.insert(eq.guard);
        visible.extend(eq.terms.iter().map(|t| t.literal.atom));
    }
    for m in &split.minimize {
        visible.extend(m.terms.iter().map(|t| t.literal.atom));
    }
    split.visible.extend(visible);
    split
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::WeightRule;

    fn a(id: u32) -> Atom {
        Atom::new(id)
    }

    fn program(rules: Vec<Rule>) -> Program {
        let mut p = Program::new();
        for r in rules {
            p.push(r);
        }
        p
    }

    fn count(head: u32, bound: i64, body: &[u32]) -> Rule {
        Rule::Weight(WeightRule::cardinality(
            a(head),
            bound,
            body.iter().map(|&b| a(b).pos()).collect(),
        ))
    }

    #[test]
    fn shifting_two_heads() {
        let p = program(vec![Rule::disjunctive(vec![a(1), a(2)], vec![])]);
        let shifted = shift_disjunctive(&p, &DependencyGraph::build(&p)).unwrap();
        assert_eq!(
            shifted.rules,
            vec![
                Rule::basic(a(1), vec![a(2).neg()]),
                Rule::basic(a(2), vec![a(1).neg()]),
            ]
        );
    }

    #[test]
    fn shifting_rejects_head_cycles() {
        let p = program(vec![
            Rule::disjunctive(vec![a(1), a(2)], vec![a(3).pos()]),
            Rule::basic(a(1), vec![a(2).pos()]),
            Rule::basic(a(2), vec![a(1).pos()]),
        ]);
        let err = shift_disjunctive(&p, &DependencyGraph::build(&p)).unwrap_err();
        assert_eq!(
            err,
            TransformError::NotHeadCycleFree {
                rule_index: 0,
                first: a(1),
                second: a(2)
            }
        );
    }

    #[test]
    fn shifting_without_disjunction_is_identity() {
        let p = program(vec![Rule::basic(a(1), vec![a(2).neg()])]);
        assert_eq!(
            shift_disjunctive(&p, &DependencyGraph::build(&p)).unwrap(),
            p
        );
    }

    #[test]
    fn isolation_of_shared_head() {
        let p = program(vec![count(1, 1, &[2]), Rule::basic(a(1), vec![a(3).pos()])]);
        let mut fresh = FreshAtoms::above(p.max_atom);
        let out = isolate_weight_heads(&p, &mut fresh);
        assert_eq!(
            out.rules,
            vec![
                count(4, 1, &[2]),
                Rule::basic(a(1), vec![a(4).pos()]),
                Rule::basic(a(1), vec![a(3).pos()]),
            ]
        );
        assert_eq!(fresh.registry(), &[(a(4), Role::IsolatedHead)]);
        assert_eq!(out.max_atom, 4);
    }

    #[test]
    fn isolation_leaves_unique_heads() {
        let p = program(vec![count(1, 1, &[2])]);
        let mut fresh = FreshAtoms::above(p.max_atom);
        assert_eq!(isolate_weight_heads(&p, &mut fresh), p);
        assert!(fresh.registry().is_empty());
    }

    #[test]
    fn isolation_of_two_weight_rules() {
        let p = program(vec![count(1, 1, &[2]), count(1, 2, &[2, 3])]);
        let mut fresh = FreshAtoms::above(p.max_atom);
        let out = isolate_weight_heads(&p, &mut fresh);
        assert_eq!(
            out.rules,
            vec![
                count(4, 1, &[2]),
                Rule::basic(a(1), vec![a(4).pos()]),
                count(5, 2, &[2, 3]),
                Rule::basic(a(1), vec![a(5).pos()]),
            ]
        );
    }

    #[test]
    fn split_produces_pair_and_equivalence() {
        let p = program(vec![
            count(1, 2, &[2, 3]),
            Rule::fact(a(2)),
            Rule::fact(a(3)),
        ]);
        let split = split_aggregates(&p, FreshAtoms::above(p.max_atom));
        assert_eq!(
            split.base.rules,
            vec![
                Rule::basic(a(1), vec![a(4).neg()]),
                Rule::basic(a(4), vec![a(1).neg()]),
                Rule::fact(a(2)),
                Rule::fact(a(3)),
            ]
        );
        assert_eq!(split.equivalences.len(), 1);
        assert_eq!(split.equivalences[0].guard, a(1));
        assert_eq!(split.equivalences[0].bound, Int::from(2));
        assert_eq!(split.fresh.registry(), &[(a(4), Role::GuardComplement)]);
    }

    #[test]
    fn split_without_aggregates_is_identity() {
        let p = program(vec![Rule::basic(a(1), vec![a(2).neg()])]);
        let split = split_aggregates(&p, FreshAtoms::above(p.max_atom));
        assert_eq!(split.base, p);
        assert!(split.equivalences.is_empty());
    }

    #[test]
    fn split_merges_duplicate_terms() {
        let p = program(vec![Rule::Weight(WeightRule::new(
            a(1),
            3,
            vec![
                WeightedLiteral::new(1, a(2).pos()),
                WeightedLiteral::new(2, a(2).pos()),
            ],
        ))]);
        let split = split_aggregates(&p, FreshAtoms::above(p.max_atom));
        assert_eq!(
            split.equivalences[0].terms,
            vec![WeightedLiteral::new(3, a(2).pos())]
        );
    }

    #[test]
    fn cwa_registers_aggregate_only_atoms() {
        let mut p = program(vec![count(1, 1, &[3])]);
        p.push_minimize(vec![WeightedLiteral::new(1, a(5).pos())]);
        let split = cwa_register(split_aggregates(&p, FreshAtoms::above(p.max_atom)));
        assert!(split.visible.contains(&a(3)));
        assert!(split.visible.contains(&a(5)));
        assert!(split.visible.contains(&a(1)));
        assert!(!split.base.rule_atoms().contains(&a(3)));
    }
}

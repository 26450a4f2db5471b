//! Level ranking for atoms on positive cycles.
//!
//! For a loop atom `a` with defining rules `r`, let `I(r)` be the positive
//! body atoms of `r` inside `a`'s SCC. Levels start at 0.
//!
//! * weak: a true `a` has some rule whose body holds and with
//!   `L(a) >= L(b) + 1` for every `b` in `I(r)`;
//! * strong: for every rule whose body holds, `L(a) <= L(b) + 1` for some
//!   `b` in `I(r)`, or `L(a) = 0` when `I(r)` is empty.
//!
//! Together they pin `L(a)` to its derivation depth inside the SCC. False
//! loop atoms get level 0 and levels never exceed the SCC size.

use std::collections::BTreeMap;

use num_traits::One;

use super::{clause_of, Completion, Cond, Definition};
use crate::pb::{clause_to_pb, encode_equiv, normalize, PbConstraint, Relation};
use crate::program::{Atom, DependencyGraph, Int, Literal, WeightedLiteral};
use crate::record::{FreshAtoms, Role};
use crate::transform::EquivConstraint;

/// Level bits per loop atom, least significant first.
pub type LevelVars = BTreeMap<Atom, Vec<Atom>>;

/// Decodes the level of an atom from its bits.
pub fn level_of<F: Fn(Atom) -> bool>(bits: &[Atom], value: F) -> u64 {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| value(b))
        .map(|(i, _)| 1u64 << i)
        .sum()
}

/// Bits needed to store `0..=size`.
fn width_for(size: usize) -> usize {
    (usize::BITS - size.leading_zeros()) as usize
}

/// One positive SCC of size >= 2 or with a self loop.
pub struct LoopComponent<'a> {
    pub atoms: &'a [Atom],
    definitions: &'a BTreeMap<Atom, Vec<Definition>>,
}

impl<'a> LoopComponent<'a> {
    pub fn definitions(&self, atom: Atom) -> &'a [Definition] {
        self.definitions
            .get(&atom)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Positive body atoms of `def` inside this component.
    pub fn internal(&self, def: &Definition) -> Vec<Atom> {
        def.positive
            .iter()
            .copied()
            .filter(|b| self.atoms.binary_search(b).is_ok())
            .collect()
    }
}

/// Allocates comparison flags and collects the constraints defining them.
pub struct LevelEncoder<'a> {
    fresh: &'a mut FreshAtoms,
    levels: &'a LevelVars,
    constraints: Vec<PbConstraint>,
    greater: BTreeMap<(Atom, Atom), Atom>,
    within_one: BTreeMap<(Atom, Atom), Atom>,
}

impl<'a> LevelEncoder<'a> {
    pub fn bits(&self, atom: Atom) -> &'a [Atom] {
        &self.levels[&atom]
    }

    fn level_terms(&self, atom: Atom, sign: i64) -> Vec<WeightedLiteral> {
        self.bits(atom)
            .iter()
            .enumerate()
            .map(|(i, b)| WeightedLiteral::new(Int::from(sign) << i, b.pos()))
            .collect()
    }

    /// Fresh flag `f <=> L(x) - L(y) >= bound`.
    fn comparison(&mut self, x: Atom, y: Atom, bound: i64) -> Atom {
        let guard = self.fresh.fresh(Role::FlagAux);
        let mut terms = self.level_terms(x, 1);
        terms.extend(self.level_terms(y, -1));
        let eq = EquivConstraint {
            guard,
            bound: Int::from(bound),
            terms,
        };
        self.constraints.extend(encode_equiv(&eq));
        guard
    }

    /// Literal equivalent to `L(a) >= L(b) + 1`.
    pub fn greater(&mut self, a: Atom, b: Atom) -> Literal {
        if let Some(&f) = self.greater.get(&(a, b)) {
            return f.pos();
        }
        let f = self.comparison(a, b, 1);
        self.greater.insert((a, b), f);
        f.pos()
    }

    /// Literal equivalent to `L(a) <= L(b) + 1`.
    pub fn within_one(&mut self, a: Atom, b: Atom) -> Literal {
        if let Some(&f) = self.within_one.get(&(a, b)) {
            return f.pos();
        }
        let f = self.comparison(b, a, -1);
        self.within_one.insert((a, b), f);
        f.pos()
    }

    /// A condition equivalent to the conjunction, introducing a defined
    /// flag when more than one literal remains.
    pub fn conjunction(&mut self, conds: &[Cond]) -> Cond {
        let mut lits: Vec<Literal> = Vec::new();
        for &c in conds {
            match c {
                Cond::True => {}
                Cond::False => return Cond::False,
                Cond::Lit(l) => {
                    if lits.contains(&!l) {
                        return Cond::False;
                    }
                    if !lits.contains(&l) {
                        lits.push(l);
                    }
                }
            }
        }
        match lits.len() {
            0 => Cond::True,
            1 => Cond::Lit(lits[0]),
            _ => {
                let f = self.fresh.fresh(Role::FlagAux);
                for &l in &lits {
                    self.clause([Cond::Lit(f.neg()), Cond::Lit(l)]);
                }
                let mut back: Vec<Cond> = lits.iter().map(|&l| Cond::Lit(!l)).collect();
                back.push(Cond::Lit(f.pos()));
                self.clause(back);
                Cond::Lit(f.pos())
            }
        }
    }

    pub fn clause(&mut self, conds: impl IntoIterator<Item = Cond>) {
        if let Some(lits) = clause_of(conds) {
            self.constraints.push(normalize(&clause_to_pb(&lits)));
        }
    }

    pub fn push(&mut self, constraint: PbConstraint) {
        self.constraints.push(normalize(&constraint));
    }
}

/// A way of ranking the atoms of one loop component.
pub trait RankingScheme: Send + Sync {
    fn name(&self) -> &'static str;

    fn encode(&self, component: &LoopComponent<'_>, enc: &mut LevelEncoder<'_>);
}

/// Only requires a well-founded supporting rule. Levels of true atoms are
/// not unique, so a stable model can have several PB extensions; kept as a
/// negative control.
#[derive(Clone, Copy, Debug, Default)]
pub struct WeakRanking;

impl RankingScheme for WeakRanking {
    fn name(&self) -> &'static str {
        "weak"
    }

    fn encode(&self, component: &LoopComponent<'_>, enc: &mut LevelEncoder<'_>) {
        for &a in component.atoms {
            let mut supports = vec![Cond::Lit(a.neg())];
            for def in component.definitions(a) {
                let mut conj = vec![def.cond];
                for b in component.internal(def) {
                    conj.push(Cond::Lit(enc.greater(a, b)));
                }
                supports.push(enc.conjunction(&conj));
            }
            enc.clause(supports);
        }
    }
}

/// Weak ranking plus an upper bound from every applicable rule, which
/// makes every level a function of the stable model.
#[derive(Clone, Copy, Debug, Default)]
pub struct StrongRanking;

impl RankingScheme for StrongRanking {
    fn name(&self) -> &'static str {
        "strong"
    }

    fn encode(&self, component: &LoopComponent<'_>, enc: &mut LevelEncoder<'_>) {
        WeakRanking.encode(component, enc);
        for &a in component.atoms {
            for def in component.definitions(a) {
                let internal = component.internal(def);
                let guard = [Cond::Lit(a.neg()), !def.cond];
                if internal.is_empty() {
                    for &bit in enc.bits(a) {
                        enc.clause(guard.into_iter().chain([Cond::Lit(bit.neg())]));
                    }
                } else {
                    let mut clause = guard.to_vec();
                    for b in internal {
                        clause.push(Cond::Lit(enc.within_one(a, b)));
                    }
                    enc.clause(clause);
                }
            }
        }
    }
}

/// Ranking schemes by name.
pub struct RankingRegistry {
    schemes: BTreeMap<&'static str, Box<dyn RankingScheme>>,
}

impl Default for RankingRegistry {
    fn default() -> Self {
        let mut registry = RankingRegistry {
            schemes: BTreeMap::new(),
        };
        registry.register(Box::new(StrongRanking));
        registry.register(Box::new(WeakRanking));
        registry
    }
}

impl RankingRegistry {
    pub fn register(&mut self, scheme: Box<dyn RankingScheme>) {
        self.schemes.insert(scheme.name(), scheme);
    }

    pub fn get(&self, name: &str) -> Option<&dyn RankingScheme> {
        self.schemes.get(name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.schemes.keys().copied()
    }
}

pub struct RankingOutput {
    pub constraints: Vec<PbConstraint>,
    pub levels: LevelVars,
}

/// Level bits and ranking constraints for every loop SCC, in SCC order.
pub fn ranking_constraints(
    completion: &Completion,
    graph: &DependencyGraph,
    fresh: &mut FreshAtoms,
    scheme: &dyn RankingScheme,
) -> RankingOutput {
    let mut levels = LevelVars::new();
    let mut constraints = Vec::new();
    for (id, atoms) in graph.sccs.iter().enumerate() {
        if !graph.is_loop_scc(id) {
            continue;
        }
        let width = width_for(atoms.len());
        for &a in atoms {
            let bits = (0..width).map(|_| fresh.fresh(Role::LevelBit)).collect();
            levels.insert(a, bits);
        }

        let mut enc = LevelEncoder {
            fresh,
            levels: &levels,
            constraints: Vec::new(),
            greater: BTreeMap::new(),
            within_one: BTreeMap::new(),
        };
        let size = Int::from(atoms.len());
        for &a in atoms {
            let terms: Vec<(Int, Literal)> = enc
                .bits(a)
                .iter()
                .enumerate()
                .map(|(i, b)| (Int::one() << i, b.pos()))
                .collect();
            let max: Int = terms.iter().map(|(c, _)| c).sum();
            if max > size {
                enc.push(PbConstraint::new(terms, Relation::Le, size.clone()));
            }
            for &bit in enc.bits(a) {
                enc.clause([Cond::Lit(bit.neg()), Cond::Lit(a.pos())]);
            }
        }
        let component = LoopComponent {
            atoms,
            definitions: &completion.definitions,
        };
        scheme.encode(&component, &mut enc);
        constraints.append(&mut enc.constraints);
    }
    RankingOutput {
        constraints,
        levels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(width_for(1), 1);
        assert_eq!(width_for(2), 2);
        assert_eq!(width_for(3), 2);
        assert_eq!(width_for(4), 3);
        assert_eq!(width_for(7), 3);
        assert_eq!(width_for(8), 4);
    }

    #[test]
    fn level_decoding() {
        let bits = [Atom::new(4), Atom::new(5)];
        assert_eq!(level_of(&bits, |x| x == Atom::new(5)), 2);
        assert_eq!(level_of(&bits, |_| true), 3);
    }

    #[test]
    fn registry_lookup() {
        let registry = RankingRegistry::default();
        assert_eq!(registry.get("strong").unwrap().name(), "strong");
        assert!(registry.get("weak").is_some());
        assert!(registry.get("medium").is_none());
        assert_eq!(registry.names().collect::<Vec<_>>(), vec!["strong", "weak"]);
    }
}

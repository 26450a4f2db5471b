//! Ground logic programs as read from the smodels format.
//!
//! Atoms keep the numbers they were given in the input. Nothing is
//! renumbered before translation; fresh atoms are always allocated above
//! [`Program::max_atom`].

mod graph;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Not;

use num_bigint::BigInt;

pub use graph::{
    check_no_recursive_aggregates, tight_atoms, DependencyGraph, RecursiveAggregate, TightPartition,
};

/// Arbitrary precision integer used for weights, bounds and coefficients.
pub type Int = BigInt;

/// A propositional atom, identified by its positive smodels number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(u32);

impl Atom {
    /// # Panics
    ///
    /// Panics if `id` is zero.
    pub const fn new(id: u32) -> Self {
        assert!(id >= 1, "atom ids start at 1");
        Atom(id)
    }

    pub const fn try_new(id: u32) -> Option<Self> {
        if id == 0 {
            None
        } else {
            Some(Atom(id))
        }
    }

    pub const fn id(self) -> u32 {
        self.0
    }

    pub const fn pos(self) -> Literal {
        Literal::pos(self)
    }

    pub const fn neg(self) -> Literal {
        Literal::neg(self)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An atom or its (default) negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub const fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            negated: false,
        }
    }

    pub const fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            negated: true,
        }
    }

    /// Truth value of the literal given the truth value of its atom.
    pub fn eval(self, atom_true: bool) -> bool {
        atom_true != self.negated
    }

    pub fn holds_in(self, interpretation: &BTreeSet<Atom>) -> bool {
        self.eval(interpretation.contains(&self.atom))
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal {
            atom: self.atom,
            negated: !self.negated,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~{}", self.atom)
        } else {
            write!(f, "{}", self.atom)
        }
    }
}

/// A literal with a weight, as found in weight rules and minimize statements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedLiteral {
    pub weight: Int,
    pub literal: Literal,
}

impl WeightedLiteral {
    pub fn new(weight: impl Into<Int>, literal: Literal) -> Self {
        WeightedLiteral {
            weight: weight.into(),
            literal,
        }
    }
}

/// `head <- body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicRule {
    pub head: Atom,
    pub body: Vec<Literal>,
}

/// `{h1, ..., hk} <- body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceRule {
    pub heads: Vec<Atom>,
    pub body: Vec<Literal>,
}

/// `h1 | ... | hk <- body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjunctiveRule {
    pub heads: Vec<Atom>,
    pub body: Vec<Literal>,
}

/// `head <- bound <= sum(w_i * l_i)`.
///
/// Constraint rules (smodels type 2) are stored as weight rules with unit
/// weights; `cardinality` remembers the original form so the writer can
/// reproduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightRule {
    pub head: Atom,
    pub bound: Int,
    pub terms: Vec<WeightedLiteral>,
    pub cardinality: bool,
}

impl WeightRule {
    pub fn new(head: Atom, bound: impl Into<Int>, terms: Vec<WeightedLiteral>) -> Self {
        WeightRule {
            head,
            bound: bound.into(),
            terms,
            cardinality: false,
        }
    }

    /// A constraint rule: `head <- bound <= #count{literals}`.
    pub fn cardinality(head: Atom, bound: impl Into<Int>, literals: Vec<Literal>) -> Self {
        WeightRule {
            head,
            bound: bound.into(),
            terms: literals
                .into_iter()
                .map(|l| WeightedLiteral::new(1, l))
                .collect(),
            cardinality: true,
        }
    }

    pub fn body_holds(&self, interpretation: &BTreeSet<Atom>) -> bool {
        let sum: Int = self
            .terms
            .iter()
            .filter(|t| t.literal.holds_in(interpretation))
            .map(|t| &t.weight)
            .sum();
        sum >= self.bound
    }
}

/// A minimize statement. `priority` is its 0-based position among the
/// minimize statements of the program, in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizeStatement {
    pub priority: usize,
    pub terms: Vec<WeightedLiteral>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Basic(BasicRule),
    Choice(ChoiceRule),
    Disjunctive(DisjunctiveRule),
    Weight(WeightRule),
    Minimize(MinimizeStatement),
}

impl Rule {
    pub fn basic(head: Atom, body: Vec<Literal>) -> Self {
        Rule::Basic(BasicRule { head, body })
    }

    pub fn fact(head: Atom) -> Self {
        Rule::basic(head, Vec::new())
    }

    pub fn choice(heads: Vec<Atom>, body: Vec<Literal>) -> Self {
        Rule::Choice(ChoiceRule { heads, body })
    }

    pub fn disjunctive(heads: Vec<Atom>, body: Vec<Literal>) -> Self {
        Rule::Disjunctive(DisjunctiveRule { heads, body })
    }

    /// Head atoms; empty for minimize statements.
    pub fn heads(&self) -> &[Atom] {
        match self {
            Rule::Basic(r) => std::slice::from_ref(&r.head),
            Rule::Weight(r) => std::slice::from_ref(&r.head),
            Rule::Choice(r) => &r.heads,
            Rule::Disjunctive(r) => &r.heads,
            Rule::Minimize(_) => &[],
        }
    }

    /// Every literal occurring in the body (weight and minimize terms included).
    pub fn body_literals(&self) -> Box<dyn Iterator<Item = Literal> + '_> {
        match self {
            Rule::Basic(r) => Box::new(r.body.iter().copied()),
            Rule::Choice(r) => Box::new(r.body.iter().copied()),
            Rule::Disjunctive(r) => Box::new(r.body.iter().copied()),
            Rule::Weight(r) => Box::new(r.terms.iter().map(|t| t.literal)),
            Rule::Minimize(r) => Box::new(r.terms.iter().map(|t| t.literal)),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.heads()
            .iter()
            .copied()
            .chain(self.body_literals().map(|l| l.atom))
    }
}

/// A ground program together with its symbol table and compute statements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub symbols: BTreeMap<Atom, String>,
    /// Atoms that must be true (`B+`).
    pub compute_true: Vec<Atom>,
    /// Atoms that must be false (`B-`).
    pub compute_false: Vec<Atom>,
    pub models: u64,
    /// Upper bound on every atom id in the program; fresh atoms go above it.
    pub max_atom: u32,
}

impl Default for Program {
    fn default() -> Self {
        Program {
            rules: Vec::new(),
            symbols: BTreeMap::new(),
            compute_true: Vec::new(),
            compute_false: Vec::new(),
            models: 1,
            max_atom: 0,
        }
    }
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    fn bump(&mut self, atom: Atom) {
        self.max_atom = self.max_atom.max(atom.id());
    }

    pub fn push(&mut self, rule: Rule) {
        let max = rule.atoms().map(Atom::id).max().unwrap_or(0);
        self.max_atom = self.max_atom.max(max);
        self.rules.push(rule);
    }

    /// Appends a minimize statement with the next free priority index.
    pub fn push_minimize(&mut self, terms: Vec<WeightedLiteral>) {
        let priority = self.minimize_statements().count();
        self.push(Rule::Minimize(MinimizeStatement { priority, terms }));
    }

    pub fn name(&mut self, atom: Atom, name: impl Into<String>) {
        self.bump(atom);
        self.symbols.insert(atom, name.into());
    }

    pub fn require_true(&mut self, atom: Atom) {
        self.bump(atom);
        self.compute_true.push(atom);
    }

    pub fn require_false(&mut self, atom: Atom) {
        self.bump(atom);
        self.compute_false.push(atom);
    }

    /// `:- body`, encoded the lparse way: a rule deriving a designated atom
    /// that the compute statement forces false.
    pub fn integrity(&mut self, falsum: Atom, body: Vec<Literal>) {
        self.push(Rule::basic(falsum, body));
        if !self.compute_false.contains(&falsum) {
            self.require_false(falsum);
        }
    }

    pub fn minimize_statements(&self) -> impl Iterator<Item = &MinimizeStatement> {
        self.rules.iter().filter_map(|r| match r {
            Rule::Minimize(m) => Some(m),
            _ => None,
        })
    }

    pub fn weight_rules(&self) -> impl Iterator<Item = &WeightRule> {
        self.rules.iter().filter_map(|r| match r {
            Rule::Weight(w) => Some(w),
            _ => None,
        })
    }

    /// Every atom mentioned in rules, the symbol table or compute statements.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut atoms: BTreeSet<Atom> = self.rules.iter().flat_map(Rule::atoms).collect();
        atoms.extend(self.symbols.keys().copied());
        atoms.extend(self.compute_true.iter().copied());
        atoms.extend(self.compute_false.iter().copied());
        atoms
    }

    /// Atoms occurring in some rule (heads or bodies), ignoring the symbol
    /// table and compute statements.
    pub fn rule_atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().flat_map(Rule::atoms).collect()
    }

    pub fn has_disjunction(&self) -> bool {
        self.rules.iter().any(|r| matches!(r, Rule::Disjunctive(_)))
    }

    /// Recomputes `max_atom` from the atoms actually mentioned, keeping any
    /// larger value already stored.
    pub fn refresh_max_atom(&mut self) {
        let max = self.atoms().iter().map(|a| a.id()).max().unwrap_or(0);
        self.max_atom = self.max_atom.max(max);
    }
}

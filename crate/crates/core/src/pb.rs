//! Linear pseudo-Boolean constraints and the encodings that produce them.
//!
//! After [`normalize`] every constraint has relation `>=` or `=`, only
//! positive literals, at most one term per atom and no zero coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::program::{Atom, Int, Literal, MinimizeStatement};
use crate::transform::EquivConstraint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Ge,
    Eq,
    Le,
    Gt,
    Lt,
}

impl Relation {
    pub fn holds(self, lhs: &Int, rhs: &Int) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Lt => lhs < rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Lt => "<",
        }
    }
}

/// `sum(coeff_i * lit_i) <relation> rhs`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PbConstraint {
    pub terms: Vec<(Int, Literal)>,
    pub relation: Relation,
    pub rhs: Int,
}

impl PbConstraint {
    pub fn new(terms: Vec<(Int, Literal)>, relation: Relation, rhs: impl Into<Int>) -> Self {
        PbConstraint {
            terms,
            relation,
            rhs: rhs.into(),
        }
    }

    /// Left-hand side value under an assignment of atoms.
    pub fn lhs<F: Fn(Atom) -> bool>(&self, value: F) -> Int {
        self.terms
            .iter()
            .filter(|(_, l)| l.eval(value(l.atom)))
            .map(|(c, _)| c)
            .sum()
    }

    pub fn satisfied<F: Fn(Atom) -> bool>(&self, value: F) -> bool {
        self.relation.holds(&self.lhs(value), &self.rhs)
    }

    pub fn is_normalized(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        matches!(self.relation, Relation::Ge | Relation::Eq)
            && self
                .terms
                .iter()
                .all(|(c, l)| !l.negated && !c.is_zero() && seen.insert(l.atom))
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.terms.iter().map(|(_, l)| l.atom)
    }
}

impl fmt::Display for PbConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, l) in &self.terms {
            let sign = if c.is_negative() { "" } else { "+" };
            write!(f, "{sign}{c} {l} ")?;
        }
        write!(f, "{} {}", self.relation.symbol(), self.rhs)
    }
}

/// An ordered set of constraints over variables `1..=num_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PbTheory {
    pub num_vars: u32,
    pub constraints: Vec<PbConstraint>,
}

impl PbTheory {
    pub fn new(num_vars: u32) -> Self {
        PbTheory {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, constraint: PbConstraint) {
        self.constraints.push(constraint);
    }

    pub fn satisfied<F: Fn(Atom) -> bool + Copy>(&self, value: F) -> bool {
        self.constraints.iter().all(|c| c.satisfied(value))
    }
}

/// Merges duplicate atoms (preserving first occurrence order) after turning
/// every negated literal `w * ~x` into `w - w * x`. Returns the positive
/// terms and the constant that was moved out.
pub fn positive_form(terms: &[(Int, Literal)]) -> (Vec<(Int, Atom)>, Int) {
    let mut order: Vec<Atom> = Vec::new();
    let mut coeffs: BTreeMap<Atom, Int> = BTreeMap::new();
    let mut constant = Int::zero();
    for (c, l) in terms {
        let entry = coeffs.entry(l.atom).or_insert_with(|| {
            order.push(l.atom);
            Int::zero()
        });
        if l.negated {
            constant += c;
            *entry -= c;
        } else {
            *entry += c;
        }
    }
    let merged = order
        .into_iter()
        .filter_map(|a| {
            let c = coeffs.remove(&a).unwrap();
            (!c.is_zero()).then_some((c, a))
        })
        .collect();
    (merged, constant)
}

/// Rewrites a constraint into `>=`/`=` form over positive literals.
pub fn normalize(c: &PbConstraint) -> PbConstraint {
    let (terms, constant) = positive_form(&c.terms);
    let mut rhs = &c.rhs - constant;
    let mut terms: Vec<(Int, Literal)> = terms.into_iter().map(|(c, a)| (c, a.pos())).collect();
    let relation = match c.relation {
        Relation::Ge => Relation::Ge,
        Relation::Eq => Relation::Eq,
        Relation::Gt => {
            rhs += 1;
            Relation::Ge
        }
        Relation::Le | Relation::Lt => {
            for (coeff, _) in &mut terms {
                *coeff = -&*coeff;
            }
            rhs = -rhs;
            if c.relation == Relation::Lt {
                rhs += 1;
            }
            Relation::Ge
        }
    };
    PbConstraint {
        terms,
        relation,
        rhs,
    }
}

/// `l1 + ... + lk >= 1`; the empty clause becomes `0 >= 1`.
pub fn clause_to_pb(clause: &[Literal]) -> PbConstraint {
    PbConstraint::new(
        clause.iter().map(|&l| (Int::one(), l)).collect(),
        Relation::Ge,
        1,
    )
}

/// Big-M constants for `h <=> bound <= sum(w_i * l_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigMParams {
    pub m1: Int,
    pub m2: Int,
}

impl BigMParams {
    /// Smallest constants that make both guarded constraints vacuous when
    /// their guard is off.
    ///
    /// `m1 = bound - sum(min(0, w_i))` is exact. For `m2` the classic
    /// requirement is `m2 > bound + sum(max(w_i, 0))`, which only covers
    /// non-negative bounds: with the guard true the second constraint needs
    /// `m2 > sum(max(w_i, 0)) - bound`. Taking `|bound|` satisfies both.
    pub fn minimal(bound: &Int, terms: &[(Int, Literal)]) -> Self {
        let neg_sum: Int = terms.iter().map(|(w, _)| w.clone().min(Int::zero())).sum();
        let pos_sum: Int = terms.iter().map(|(w, _)| w.clone().max(Int::zero())).sum();
        BigMParams {
            m1: bound - neg_sum,
            m2: bound.abs() + pos_sum + 1,
        }
    }
}

/// The two (un-normalized) guarded constraints for an equivalence:
///
/// ```text
/// sum(w_i * l_i) + m1 * ~h >= bound
/// sum(w_i * l_i) - m2 *  h <  bound
/// ```
pub fn equiv_constraints(eq: &EquivConstraint) -> [PbConstraint; 2] {
    let terms: Vec<(Int, Literal)> = eq
        .terms
        .iter()
        .map(|t| (t.weight.clone(), t.literal))
        .collect();
    let params = BigMParams::minimal(&eq.bound, &terms);
    let mut first = terms.clone();
    first.push((params.m1, eq.guard.neg()));
    let mut second = terms;
    second.push((-params.m2, eq.guard.pos()));
    [
        PbConstraint::new(first, Relation::Ge, eq.bound.clone()),
        PbConstraint::new(second, Relation::Lt, eq.bound.clone()),
    ]
}

/// Normalized big-M encoding of `guard <=> bound <= sum(w_i * l_i)`.
pub fn encode_equiv(eq: &EquivConstraint) -> [PbConstraint; 2] {
    equiv_constraints(eq).map(|c| normalize(&c))
}

/// Which minimize statement dominates when several are present.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MinOrder {
    /// The first statement in file order is the most significant.
    First,
    /// The last statement in file order is the most significant (lparse).
    #[default]
    Last,
}

impl MinOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            MinOrder::First => "first",
            MinOrder::Last => "last",
        }
    }
}

impl std::str::FromStr for MinOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "first" => Ok(MinOrder::First),
            "last" => Ok(MinOrder::Last),
            other => Err(format!("unknown minimize order `{other}` (first|last)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectiveLevel {
    pub priority: usize,
    pub multiplier: Int,
    pub max_value: Int,
}

/// A single linear objective standing in for a stack of minimize statements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub terms: Vec<(Int, Literal)>,
    /// Most significant level first.
    pub levels: Vec<ObjectiveLevel>,
}

impl Objective {
    pub fn value<F: Fn(Atom) -> bool>(&self, value: F) -> Int {
        self.terms
            .iter()
            .filter(|(_, l)| l.eval(value(l.atom)))
            .map(|(c, _)| c)
            .sum()
    }
}

/// Value of one minimize statement under an assignment.
pub fn level_value<F: Fn(Atom) -> bool>(statement: &MinimizeStatement, value: F) -> Int {
    statement
        .terms
        .iter()
        .filter(|t| t.literal.eval(value(t.literal.atom)))
        .map(|t| &t.weight)
        .sum()
}

/// Folds several minimize statements into one objective by scaling each
/// level with the product of `(max + 1)` over all less significant levels.
pub fn flatten_objectives(mins: &[MinimizeStatement], order: MinOrder) -> Option<Objective> {
    if mins.is_empty() {
        return None;
    }
    let mut by_significance: Vec<&MinimizeStatement> = mins.iter().collect();
    by_significance.sort_by_key(|m| m.priority);
    if order == MinOrder::Last {
        by_significance.reverse();
    }

    let mut levels = Vec::with_capacity(mins.len());
    let mut multiplier = Int::one();
    for statement in by_significance.iter().rev() {
        let max_value: Int = statement.terms.iter().map(|t| &t.weight).sum();
        levels.push(ObjectiveLevel {
            priority: statement.priority,
            multiplier: multiplier.clone(),
            max_value: max_value.clone(),
        });
        multiplier *= max_value + 1;
    }
    levels.reverse();

    let mut terms = Vec::new();
    for (level, statement) in levels.iter().zip(&by_significance) {
        for t in &statement.terms {
            terms.push((&t.weight * &level.multiplier, t.literal));
        }
    }
    Some(Objective { terms, levels })
}

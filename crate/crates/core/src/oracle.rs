//! Brute-force reference semantics for small inputs.
//!
//! Nothing here shares code with the translation: stable models are found
//! by checking every interpretation against the FLP reduct (and, as a
//! second opinion, the Gelfond-Lifschitz reduct with smodels' weight-rule
//! reduct), PB models by plain backtracking.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::pb::{level_value, MinOrder, PbTheory, Relation};
use crate::program::{Atom, Int, Literal, MinimizeStatement, Program, Rule};
use crate::record::TranslationRecord;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} has {size} elements, over the oracle limit of {limit}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("coefficient does not fit into 128 bits")]
    Overflow,
    #[error("the GL oracle does not handle disjunctive rules")]
    Unsupported,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    /// Most atoms a program may mention for stable-model enumeration.
    pub max_atoms: usize,
    /// Most variables a PB theory may have.
    pub max_vars: usize,
    /// Most PB models collected before giving up.
    pub max_models: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_atoms: 20,
            max_vars: 256,
            max_models: 1 << 20,
        }
    }
}

type Model = BTreeSet<Atom>;

fn holds(l: Literal, i: &Model) -> bool {
    i.contains(&l.atom) != l.negated
}

fn body_holds(body: &[Literal], i: &Model) -> bool {
    body.iter().all(|&l| holds(l, i))
}

fn rule_body_holds(rule: &Rule, i: &Model) -> bool {
    match rule {
        Rule::Basic(r) => body_holds(&r.body, i),
        Rule::Choice(r) => body_holds(&r.body, i),
        Rule::Disjunctive(r) => body_holds(&r.body, i),
        Rule::Weight(r) => r.body_holds(i),
        Rule::Minimize(_) => false,
    }
}

/// `j` satisfies `rule` as a member of the FLP reduct w.r.t. `i`.
fn satisfies(rule: &Rule, i: &Model, j: &Model) -> bool {
    if !rule_body_holds(rule, j) {
        return true;
    }
    match rule {
        Rule::Basic(r) => j.contains(&r.head),
        Rule::Weight(r) => j.contains(&r.head),
        Rule::Disjunctive(r) => r.heads.iter().any(|h| j.contains(h)),
        Rule::Choice(r) => r.heads.iter().all(|h| !i.contains(h) || j.contains(h)),
        Rule::Minimize(_) => true,
    }
}

fn vocabulary(program: &Program, limit: usize) -> Result<Vec<Atom>, OracleError> {
    let atoms: Vec<Atom> = program.atoms().into_iter().collect();
    if atoms.len() > limit || atoms.len() >= 64 {
        return Err(OracleError::CapExceeded {
            what: "program vocabulary",
            size: atoms.len(),
            limit,
        });
    }
    Ok(atoms)
}

fn from_mask(atoms: &[Atom], mask: u64) -> Model {
    atoms
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, &a)| a)
        .collect()
}

fn compute_ok(program: &Program, i: &Model) -> bool {
    program.compute_true.iter().all(|a| i.contains(a))
        && !program.compute_false.iter().any(|a| i.contains(a))
}

/// All stable models under the FLP reduct, sorted.
pub fn enumerate_stable(program: &Program, max_atoms: usize) -> Result<Vec<Model>, OracleError> {
    let atoms = vocabulary(program, max_atoms)?;
    let mut models = Vec::new();
    for mask in 0u64..1 << atoms.len() {
        let i = from_mask(&atoms, mask);
        if !compute_ok(program, &i) || !program.rules.iter().all(|r| satisfies(r, &i, &i)) {
            continue;
        }
        let reduct: Vec<&Rule> = program
            .rules
            .iter()
            .filter(|r| rule_body_holds(r, &i))
            .collect();
        // proper submasks of `mask`
        let mut sub = mask;
        let mut minimal = true;
        while sub != 0 {
            sub = (sub - 1) & mask;
            let j = from_mask(&atoms, sub);
            if reduct.iter().all(|r| satisfies(r, &i, &j)) {
                minimal = false;
                break;
            }
        }
        if minimal {
            models.push(i);
        }
    }
    models.sort();
    Ok(models)
}

/// Least model of the Gelfond-Lifschitz reduct, with weight rules reduced
/// the smodels way (negative literals true in `i` lower the bound).
fn gl_least_model(program: &Program, i: &Model) -> Model {
    // head, positive body, weighted positive literals, residual bound
    struct Reduced {
        heads: Vec<Atom>,
        body: Vec<Atom>,
        weighted: Vec<(Int, Atom)>,
        bound: Int,
    }
    let mut reduced = Vec::new();
    for rule in &program.rules {
        match rule {
            Rule::Basic(_) | Rule::Choice(_) => {
                let (heads, body) = match rule {
                    Rule::Basic(r) => (vec![r.head], &r.body),
                    Rule::Choice(r) => (
                        r.heads.iter().copied().filter(|h| i.contains(h)).collect(),
                        &r.body,
                    ),
                    _ => unreachable!(),
                };
                if body.iter().any(|l| l.negated && i.contains(&l.atom)) {
                    continue;
                }
                reduced.push(Reduced {
                    heads,
                    body: body.iter().filter(|l| !l.negated).map(|l| l.atom).collect(),
                    weighted: Vec::new(),
                    bound: Int::from(0),
                });
            }
            Rule::Weight(w) => {
                let mut bound = w.bound.clone();
                let mut weighted = Vec::new();
                for t in &w.terms {
                    if t.literal.negated {
                        if !i.contains(&t.literal.atom) {
                            bound -= &t.weight;
                        }
                    } else {
                        weighted.push((t.weight.clone(), t.literal.atom));
                    }
                }
                reduced.push(Reduced {
                    heads: vec![w.head],
                    body: Vec::new(),
                    weighted,
                    bound,
                });
            }
            Rule::Minimize(_) | Rule::Disjunctive(_) => {}
        }
    }
    let mut model = Model::new();
    loop {
        let before = model.len();
        for r in &reduced {
            if !r.body.iter().all(|b| model.contains(b)) {
                continue;
            }
            let sum: Int = r
                .weighted
                .iter()
                .filter(|(_, a)| model.contains(a))
                .map(|(w, _)| w)
                .sum();
            if sum >= r.bound {
                model.extend(r.heads.iter().copied());
            }
        }
        if model.len() == before {
            return model;
        }
    }
}

/// All stable models via the GL reduct; disjunctive programs are refused.
pub fn enumerate_stable_gl(program: &Program, max_atoms: usize) -> Result<Vec<Model>, OracleError> {
    if program.has_disjunction() {
        return Err(OracleError::Unsupported);
    }
    let atoms = vocabulary(program, max_atoms)?;
    let mut models = Vec::new();
    for mask in 0u64..1 << atoms.len() {
        let i = from_mask(&atoms, mask);
        if compute_ok(program, &i) && gl_least_model(program, &i) == i {
            models.push(i);
        }
    }
    models.sort();
    Ok(models)
}

/// Per-statement values, most significant first.
pub fn cost_vector(mins: &[&MinimizeStatement], order: MinOrder, model: &Model) -> Vec<Int> {
    let mut sorted: Vec<&MinimizeStatement> = mins.to_vec();
    sorted.sort_by_key(|m| m.priority);
    if order == MinOrder::Last {
        sorted.reverse();
    }
    sorted
        .iter()
        .map(|m| level_value(m, |a| model.contains(&a)))
        .collect()
}

/// Stable models that are lexicographically optimal for the program's
/// minimize statements, together with their cost vector.
pub fn optimal_stable(
    program: &Program,
    order: MinOrder,
    max_atoms: usize,
) -> Result<(Vec<Model>, Option<Vec<Int>>), OracleError> {
    let models = enumerate_stable(program, max_atoms)?;
    let mins: Vec<&MinimizeStatement> = program.minimize_statements().collect();
    let mut best: Option<Vec<Int>> = None;
    let mut optimal = Vec::new();
    for m in models {
        let cost = cost_vector(&mins, order, &m);
        match &best {
            Some(b) if &cost > b => continue,
            Some(b) if &cost == b => optimal.push(m),
            _ => {
                best = Some(cost);
                optimal = vec![m];
            }
        }
    }
    Ok((optimal, best))
}

/// `sum c_i * l_i >= rhs` with positive coefficients, over variable indices.
struct Ge {
    terms: Vec<(i128, usize, bool)>,
    rhs: i128,
}

fn to_i128(x: &Int) -> Result<i128, OracleError> {
    x.to_i128().ok_or(OracleError::Overflow)
}

fn ge_constraints(theory: &PbTheory) -> Result<Vec<Ge>, OracleError> {
    let mut out = Vec::new();
    for c in &theory.constraints {
        let mut terms = Vec::with_capacity(c.terms.len());
        for (w, l) in &c.terms {
            terms.push((to_i128(w)?, l.atom.id() as usize, l.negated));
        }
        let rhs = to_i128(&c.rhs)?;
        let (flip, bump) = match c.relation {
            Relation::Ge => (vec![false], 0),
            Relation::Gt => (vec![false], 1),
            Relation::Le => (vec![true], 0),
            Relation::Lt => (vec![true], 1),
            Relation::Eq => (vec![false, true], 0),
        };
        for negate in flip {
            let sign = if negate { -1 } else { 1 };
            let mut rhs = sign * rhs + bump;
            let mut positive = Vec::with_capacity(terms.len());
            for &(w, v, neg) in &terms {
                let w = sign * w;
                if w < 0 {
                    // w*l = w - w*~l
                    rhs = rhs.checked_sub(w).ok_or(OracleError::Overflow)?;
                    positive.push((-w, v, !neg));
                } else if w > 0 {
                    positive.push((w, v, neg));
                }
            }
            out.push(Ge {
                terms: positive,
                rhs,
            });
        }
    }
    Ok(out)
}

/// Static order: repeatedly take the constraint with the fewest variables
/// not yet ordered, so constraints become fully decided early.
fn variable_order(constraints: &[Ge], num_vars: usize) -> Vec<usize> {
    let mut placed = vec![false; num_vars + 1];
    let mut order = Vec::with_capacity(num_vars);
    let mut open: Vec<&Ge> = constraints.iter().collect();
    loop {
        let pending = |c: &Ge| {
            let mut vars: Vec<usize> = c
                .terms
                .iter()
                .map(|t| t.1)
                .filter(|&v| !placed[v])
                .collect();
            vars.sort_unstable();
            vars.dedup();
            vars
        };
        open.retain(|c| c.terms.iter().any(|t| !placed[t.1]));
        let Some(next) = open.iter().min_by_key(|c| pending(c).len()) else {
            break;
        };
        for v in pending(next) {
            placed[v] = true;
            order.push(v);
        }
    }
    order.extend((1..=num_vars).filter(|&v| !placed[v]));
    order
}

struct Search {
    /// Occurrences per variable: (constraint, coefficient, negated).
    occurs: Vec<Vec<(usize, i128, bool)>>,
    /// Sum of coefficients of literals not yet false, minus rhs.
    slack: Vec<i128>,
    order: Vec<usize>,
    value: Vec<bool>,
    models: Vec<Model>,
    max_models: usize,
}

impl Search {
    fn run(&mut self, depth: usize) -> Result<(), OracleError> {
        if depth == self.order.len() {
            if self.models.len() == self.max_models {
                return Err(OracleError::CapExceeded {
                    what: "PB model set",
                    size: self.max_models + 1,
                    limit: self.max_models,
                });
            }
            let model = (1..self.value.len())
                .filter(|&v| self.value[v])
                .map(|v| Atom::new(v as u32))
                .collect();
            self.models.push(model);
            return Ok(());
        }
        let var = self.order[depth];
        for choice in [false, true] {
            self.value[var] = choice;
            let mut feasible = true;
            for k in 0..self.occurs[var].len() {
                let (c, w, neg) = self.occurs[var][k];
                // the literal is false when its value differs from !neg
                if choice == neg {
                    self.slack[c] -= w;
                    if self.slack[c] < 0 {
                        feasible = false;
                    }
                }
            }
            if feasible {
                self.run(depth + 1)?;
            }
            for k in 0..self.occurs[var].len() {
                let (c, w, neg) = self.occurs[var][k];
                if choice == neg {
                    self.slack[c] += w;
                }
            }
        }
        self.value[var] = false;
        Ok(())
    }
}

/// All models of a PB theory over variables `1..=num_vars`, as the sets of
/// true variables, sorted.
pub fn enumerate_pb_models(
    theory: &PbTheory,
    limits: &OracleLimits,
) -> Result<Vec<Model>, OracleError> {
    let num_vars = theory.num_vars as usize;
    if num_vars > limits.max_vars {
        return Err(OracleError::CapExceeded {
            what: "PB theory",
            size: num_vars,
            limit: limits.max_vars,
        });
    }
    let constraints = ge_constraints(theory)?;
    let mut occurs = vec![Vec::new(); num_vars + 1];
    let mut slack = Vec::with_capacity(constraints.len());
    for (k, c) in constraints.iter().enumerate() {
        let mut total: i128 = 0;
        for &(w, v, neg) in &c.terms {
            total = total.checked_add(w).ok_or(OracleError::Overflow)?;
            occurs[v].push((k, w, neg));
        }
        slack.push(total - c.rhs);
    }
    if slack.iter().any(|&s| s < 0) {
        return Ok(Vec::new());
    }
    let mut search = Search {
        occurs,
        slack,
        order: variable_order(&constraints, num_vars),
        value: vec![false; num_vars + 1],
        models: Vec::new(),
        max_models: limits.max_models,
    };
    search.run(0)?;
    let mut models = search.models;
    models.sort();
    Ok(models)
}

/// Models minimizing `objective` (all models when there is none).
pub fn optimal_pb_models(
    theory: &PbTheory,
    objective: Option<&[(Int, Literal)]>,
    limits: &OracleLimits,
) -> Result<(Vec<Model>, Option<Int>), OracleError> {
    let models = enumerate_pb_models(theory, limits)?;
    let Some(objective) = objective else {
        return Ok((models, None));
    };
    let mut best: Option<Int> = None;
    let mut optimal = Vec::new();
    for m in models {
        let value: Int = objective
            .iter()
            .filter(|(_, l)| holds(*l, &m))
            .map(|(c, _)| c)
            .sum();
        match &best {
            Some(b) if &value > b => continue,
            Some(b) if &value == b => optimal.push(m),
            _ => {
                best = Some(value);
                optimal = vec![m];
            }
        }
    }
    Ok((optimal, best))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BijectionReport {
    pub stable_count: usize,
    pub pb_count: usize,
    /// Stable models without a PB extension.
    pub unmatched_stable: Vec<Model>,
    /// Projections of PB models that are not stable models.
    pub unmatched_pb: Vec<Model>,
    /// Stable models with more than one PB extension, and how many.
    pub multiply_extended: Vec<(Model, usize)>,
}

impl BijectionReport {
    pub fn is_bijection(&self) -> bool {
        self.unmatched_stable.is_empty()
            && self.unmatched_pb.is_empty()
            && self.multiply_extended.is_empty()
    }
}

/// Projects PB models onto the original atoms of the record.
pub fn project(models: &[Model], record: &TranslationRecord) -> Vec<Model> {
    models
        .iter()
        .map(|m| {
            m.iter()
                .copied()
                .filter(|a| record.original_atoms.contains(a))
                .collect()
        })
        .collect()
}

/// Compares the stable models of `program` with the projected PB models of
/// its translation.
pub fn check_bijection(
    program: &Program,
    theory: &PbTheory,
    record: &TranslationRecord,
    limits: &OracleLimits,
) -> Result<BijectionReport, OracleError> {
    let stable = enumerate_stable(program, limits.max_atoms)?;
    let pb = enumerate_pb_models(theory, limits)?;
    let mut extensions: BTreeMap<Model, usize> = BTreeMap::new();
    for m in project(&pb, record) {
        *extensions.entry(m).or_default() += 1;
    }
    let stable_set: BTreeSet<&Model> = stable.iter().collect();
    let mut report = BijectionReport {
        stable_count: stable.len(),
        pb_count: pb.len(),
        ..Default::default()
    };
    for m in &stable {
        match extensions.get(m).copied().unwrap_or(0) {
            0 => report.unmatched_stable.push(m.clone()),
            1 => {}
            n => report.multiply_extended.push((m.clone(), n)),
        }
    }
    report.unmatched_pb = extensions
        .keys()
        .filter(|m| !stable_set.contains(m))
        .cloned()
        .collect();
    Ok(report)
}

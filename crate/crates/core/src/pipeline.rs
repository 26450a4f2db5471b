//! The full translation from a ground program to a PB theory.

use thiserror::Error;

use crate::base::{translate_base, RankingRegistry};
use crate::opb::{objective_terms, LiteralStyle};
use crate::pb::{
    clause_to_pb, encode_equiv, flatten_objectives, normalize, MinOrder, Objective, PbTheory,
};
use crate::program::{
    check_no_recursive_aggregates, Atom, DependencyGraph, Program, RecursiveAggregate,
};
use crate::record::{FreshAtoms, TranslationRecord};
use crate::transform::{
    cwa_register, isolate_weight_heads, shift_disjunctive, split_aggregates, TransformError,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslateOptions {
    pub min_order: MinOrder,
    /// Name of a scheme in [`RankingRegistry`].
    pub ranking: String,
    pub style: LiteralStyle,
    /// Leave atoms that only occur in aggregate or minimize terms
    /// unconstrained. Only useful to show why registering them matters.
    pub skip_cwa: bool,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            min_order: MinOrder::default(),
            ranking: "strong".to_owned(),
            style: LiteralStyle::default(),
            skip_cwa: false,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    RecursiveAggregate(#[from] RecursiveAggregate),
    #[error("unknown ranking scheme `{0}`")]
    UnknownRanking(String),
}

#[derive(Clone, Debug)]
pub struct Translation {
    pub theory: PbTheory,
    pub objective: Option<Objective>,
    pub record: TranslationRecord,
}

pub fn translate(
    program: &Program,
    opts: &TranslateOptions,
) -> Result<Translation, TranslateError> {
    let registry = RankingRegistry::default();
    let scheme = registry
        .get(&opts.ranking)
        .ok_or_else(|| TranslateError::UnknownRanking(opts.ranking.clone()))?;

    let graph = DependencyGraph::build(program);
    check_no_recursive_aggregates(program, &graph)?;
    let shifted = shift_disjunctive(program, &graph)?;

    let original = program.atoms();
    let max_original = original
        .iter()
        .map(|a| a.id())
        .max()
        .unwrap_or(0)
        .max(program.max_atom);
    let mut fresh = FreshAtoms::above(max_original);
    let isolated = isolate_weight_heads(&shifted, &mut fresh);
    let mut split = split_aggregates(&isolated, fresh);
    if !opts.skip_cwa {
        split = cwa_register(split);
    }

    let mut fresh = split.fresh.clone();
    let base = translate_base(&split.base, &split.visible, &mut fresh, scheme);
    let mut constraints = base.constraints;
    for eq in &split.equivalences {
        constraints.extend(encode_equiv(eq));
    }
    // Unused ids below the fresh range stay false, so every stable model
    // has exactly one PB extension.
    for id in 1..=max_original {
        let atom = Atom::new(id);
        if !original.contains(&atom) {
            constraints.push(normalize(&clause_to_pb(&[atom.neg()])));
        }
    }

    let mut theory = PbTheory::new(fresh.max_atom());
    for c in constraints {
        theory.push(c);
    }

    let objective = flatten_objectives(&split.minimize, opts.min_order);
    let mut record = TranslationRecord {
        num_vars: theory.num_vars,
        original_atoms: original,
        symbols: program.symbols.clone(),
        fresh: fresh.registry().iter().copied().collect(),
        min_order: opts.min_order,
        ..Default::default()
    };
    if let Some(objective) = &objective {
        record.levels = objective.levels.clone();
        record.objective_offset = objective_terms(objective, opts.style).1;
    }
    Ok(Translation {
        theory,
        objective,
        record,
    })
}

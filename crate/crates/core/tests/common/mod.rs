//! Random program generators shared by the integration tests.
#![allow(dead_code)]

use asp2pb_core::program::{
    check_no_recursive_aggregates, Atom, DependencyGraph, Literal, Program, Rule, WeightRule,
    WeightedLiteral,
};
use asp2pb_core::transform::EquivConstraint;
use asp2pb_core::Int;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub atoms: u32,
    pub rules: usize,
    pub weight_rules: bool,
    pub choice_rules: bool,
    pub disjunctive_rules: bool,
    pub compute: bool,
    pub minimize: usize,
    pub names: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            atoms: 6,
            rules: 7,
            weight_rules: true,
            choice_rules: true,
            disjunctive_rules: false,
            compute: true,
            minimize: 0,
            names: true,
        }
    }
}

fn atom(rng: &mut ChaCha8Rng, n: u32) -> Atom {
    Atom::new(rng.gen_range(1..=n))
}

fn literal(rng: &mut ChaCha8Rng, n: u32) -> Literal {
    let a = atom(rng, n);
    if rng.gen_bool(0.35) {
        a.neg()
    } else {
        a.pos()
    }
}

fn body(rng: &mut ChaCha8Rng, n: u32, max: usize) -> Vec<Literal> {
    let len = rng.gen_range(0..=max);
    (0..len).map(|_| literal(rng, n)).collect()
}

fn weighted(rng: &mut ChaCha8Rng, n: u32, max_len: usize, max_weight: i64) -> Vec<WeightedLiteral> {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| WeightedLiteral::new(rng.gen_range(0..=max_weight), literal(rng, n)))
        .collect()
}

fn one_rule(rng: &mut ChaCha8Rng, shape: &Shape) -> Rule {
    let n = shape.atoms;
    let mut kinds = vec![0, 0, 0];
    if shape.choice_rules {
        kinds.push(1);
    }
    if shape.weight_rules {
        kinds.extend([2, 2]);
    }
    if shape.disjunctive_rules {
        kinds.extend([3, 3]);
    }
    match *kinds.choose(rng).unwrap() {
        0 => Rule::basic(atom(rng, n), body(rng, n, 3)),
        1 => {
            let k = rng.gen_range(1..=2);
            let heads = (0..k).map(|_| atom(rng, n)).collect();
            Rule::choice(heads, body(rng, n, 2))
        }
        2 => {
            let head = atom(rng, n);
            let terms = weighted(rng, n, 4, 3);
            let total: i64 = terms
                .iter()
                .map(|t| i64::try_from(&t.weight).unwrap())
                .sum();
            let bound = rng.gen_range(0..=total + 1);
            if rng.gen_bool(0.3) {
                let lits = terms.iter().map(|t| t.literal).collect();
                Rule::Weight(WeightRule::cardinality(head, rng.gen_range(0..=3), lits))
            } else {
                Rule::Weight(WeightRule::new(head, bound, terms))
            }
        }
        _ => {
            let k = rng.gen_range(2..=3);
            let heads = (0..k).map(|_| atom(rng, n)).collect();
            Rule::disjunctive(heads, body(rng, n, 2))
        }
    }
}

/// A random program with no recursion through aggregates.
pub fn random_program(rng: &mut ChaCha8Rng, shape: &Shape) -> Program {
    loop {
        let mut p = Program::new();
        for _ in 0..rng.gen_range(1..=shape.rules) {
            p.push(one_rule(rng, shape));
        }
        if shape.compute {
            for _ in 0..rng.gen_range(0..=1) {
                p.require_true(atom(rng, shape.atoms));
            }
            for _ in 0..rng.gen_range(0..=1) {
                p.require_false(atom(rng, shape.atoms));
            }
        }
        for _ in 0..shape.minimize {
            p.push_minimize(weighted(rng, shape.atoms, 3, 3));
        }
        if shape.names {
            for a in p.atoms() {
                if rng.gen_bool(0.5) {
                    p.name(a, format!("a{}", a.id()));
                }
            }
        }
        let graph = DependencyGraph::build(&p);
        if check_no_recursive_aggregates(&p, &graph).is_ok() {
            return p;
        }
    }
}

/// A random program that is head-cycle-free.
pub fn random_hcf_program(rng: &mut ChaCha8Rng, shape: &Shape) -> Program {
    loop {
        let p = random_program(rng, shape);
        let graph = DependencyGraph::build(&p);
        if asp2pb_core::transform::shift_disjunctive(&p, &graph).is_ok() {
            return p;
        }
    }
}

pub fn random_equiv(rng: &mut ChaCha8Rng) -> EquivConstraint {
    let len = rng.gen_range(0..=10);
    let max = 1i64 << 20;
    let terms: Vec<WeightedLiteral> = (0..len)
        .map(|i| {
            let w = rng.gen_range(-max..=max);
            let atom = Atom::new(i + 2);
            let l = if rng.gen_bool(0.3) {
                atom.neg()
            } else {
                atom.pos()
            };
            WeightedLiteral::new(w, l)
        })
        .collect();
    let span: i64 = terms
        .iter()
        .map(|t| i64::try_from(&t.weight).unwrap().abs())
        .sum();
    let bound = rng.gen_range(-span - 2..=span + 2);
    EquivConstraint {
        guard: Atom::new(1),
        bound: Int::from(bound),
        terms,
    }
}

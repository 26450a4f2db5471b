use std::collections::{BTreeMap, BTreeSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;
use thiserror::Error;

use super::{Atom, Program, Rule};

/// Head-to-body dependencies of a program.
///
/// Every head member of basic, choice, disjunctive and weight rules gets an
/// edge to each atom of the rule body. SCCs are taken over the positive
/// edges only, and numbered in order of their smallest atom.
#[derive(Clone, Debug, Default)]
pub struct DependencyGraph {
    pub nodes: BTreeSet<Atom>,
    pub positive_edges: BTreeMap<Atom, BTreeSet<Atom>>,
    pub all_edges: BTreeMap<Atom, BTreeSet<Atom>>,
    pub scc_of: BTreeMap<Atom, usize>,
    pub sccs: Vec<Vec<Atom>>,
}

impl DependencyGraph {
    pub fn build(program: &Program) -> Self {
        let mut graph = DependencyGraph {
            nodes: program.atoms(),
            ..Default::default()
        };
        for rule in &program.rules {
            if matches!(rule, Rule::Minimize(_)) {
                continue;
            }
            for &head in rule.heads() {
                for lit in rule.body_literals() {
                    graph.all_edges.entry(head).or_default().insert(lit.atom);
                    if !lit.negated {
                        graph
                            .positive_edges
                            .entry(head)
                            .or_default()
                            .insert(lit.atom);
                    }
                }
            }
        }

        let mut positive = DiGraphMap::<Atom, ()>::new();
        for &atom in &graph.nodes {
            positive.add_node(atom);
        }
        for (&from, targets) in &graph.positive_edges {
            for &to in targets {
                positive.add_edge(from, to, ());
            }
        }
        let mut sccs: Vec<Vec<Atom>> = tarjan_scc(&positive)
            .into_iter()
            .map(|mut scc| {
                scc.sort();
                scc
            })
            .collect();
        sccs.sort();
        for (id, scc) in sccs.iter().enumerate() {
            for &atom in scc {
                graph.scc_of.insert(atom, id);
            }
        }
        graph.sccs = sccs;
        graph
    }

    pub fn positive_successors(&self, atom: Atom) -> impl Iterator<Item = Atom> + '_ {
        self.positive_edges
            .get(&atom)
            .into_iter()
            .flatten()
            .copied()
    }

    pub fn successors(&self, atom: Atom) -> impl Iterator<Item = Atom> + '_ {
        self.all_edges.get(&atom).into_iter().flatten().copied()
    }

    pub fn same_scc(&self, a: Atom, b: Atom) -> bool {
        matches!((self.scc_of.get(&a), self.scc_of.get(&b)), (Some(x), Some(y)) if x == y)
    }

    pub fn has_positive_self_loop(&self, atom: Atom) -> bool {
        self.positive_edges
            .get(&atom)
            .is_some_and(|t| t.contains(&atom))
    }

    /// Whether the SCC with this id contains a positive cycle.
    pub fn is_loop_scc(&self, id: usize) -> bool {
        let scc = &self.sccs[id];
        scc.len() >= 2 || self.has_positive_self_loop(scc[0])
    }

    /// Shortest path `from -> ... -> to` of length at least one over all edges.
    pub fn path(&self, from: Atom, to: Atom) -> Option<Vec<Atom>> {
        let mut parent: BTreeMap<Atom, Atom> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for next in self.successors(from) {
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(from);
                queue.push_back(next);
            }
        }
        while let Some(atom) = queue.pop_front() {
            if atom == to {
                let mut path = vec![to];
                let mut cur = to;
                loop {
                    let p = parent[&cur];
                    path.push(p);
                    if p == from {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for next in self.successors(atom) {
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(atom);
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

/// A weight rule whose body depends on its own head.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("recursion over aggregate in rule {rule_index} (head {head}): cycle {}", display_cycle(.cycle))]
pub struct RecursiveAggregate {
    pub rule_index: usize,
    pub head: Atom,
    /// `head -> body atom -> ... -> head`.
    pub cycle: Vec<Atom>,
}

fn display_cycle(cycle: &[Atom]) -> String {
    cycle
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// Rejects programs in which an atom of some weight-rule body depends on
/// the head of that rule.
pub fn check_no_recursive_aggregates(
    program: &Program,
    graph: &DependencyGraph,
) -> Result<(), RecursiveAggregate> {
    for (rule_index, rule) in program.rules.iter().enumerate() {
        let Rule::Weight(w) = rule else { continue };
        for term in &w.terms {
            if let Some(path) = graph.path(term.literal.atom, w.head) {
                let mut cycle = vec![w.head];
                cycle.extend(path);
                return Err(RecursiveAggregate {
                    rule_index,
                    head: w.head,
                    cycle,
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TightPartition {
    /// Atoms on no positive cycle.
    pub tight: BTreeSet<Atom>,
    /// Atoms on some positive cycle.
    pub looping: BTreeSet<Atom>,
}

pub fn tight_atoms(graph: &DependencyGraph) -> TightPartition {
    let mut partition = TightPartition::default();
    for (id, scc) in graph.sccs.iter().enumerate() {
        let target = if graph.is_loop_scc(id) {
            &mut partition.looping
        } else {
            &mut partition.tight
        };
        target.extend(scc.iter().copied());
    }
    partition
}

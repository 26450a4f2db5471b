use super::grids::{hexagon_strip, Graph};
use super::{BenchError, BenchmarkFamily, Builder, ParamSpec, Resolved};
use crate::program::{Atom, Program, Rule};

/// A dominating set of at most `floor(v / 4)` vertices in a strip of
/// hexagons. Every vertex dominates at most four vertices and `v = 4L + 2`,
/// so the default budget is always too small.
pub struct DominatingSet;

const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "length",
        help: "hexagons in the strip (>= 1)",
        default: None,
    },
    ParamSpec {
        name: "budget",
        help: "set size limit (default floor(v/4))",
        default: None,
    },
];

impl BenchmarkFamily for DominatingSet {
    fn name(&self) -> &'static str {
        "dominating-set"
    }

    fn description(&self) -> &'static str {
        "dominating set of a hexagon strip with budget floor(v/4)"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn scale_param(&self) -> &'static str {
        "length"
    }

    fn build(&self, params: &Resolved<'_>) -> Result<Program, BenchError> {
        let length = params.at_least("length", 1)? as usize;
        let g = hexagon_strip(length);
        let budget = params.explicit("budget").unwrap_or(g.vertices as u64 / 4);
        Ok(encode(&g, budget))
    }
}

pub fn dominating_set(length: usize, budget: u64) -> Program {
    encode(&hexagon_strip(length), budget)
}

fn encode(g: &Graph, budget: u64) -> Program {
    let mut b = Builder::new();
    let chosen: Vec<Atom> = (0..g.vertices)
        .map(|v| b.named(format!("in({})", g.labels[v])))
        .collect();
    b.program.push(Rule::choice(chosen.clone(), vec![]));
    for v in 0..g.vertices {
        let lits = g
            .closed_neighbourhood(v)
            .into_iter()
            .map(|u| chosen[u].pos())
            .collect();
        b.at_least(1, lits);
    }
    b.at_most(budget, chosen.iter().map(|a| a.pos()).collect());
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_stable;

    #[test]
    fn single_hexagon() {
        // v = 6, default budget 1
        assert!(enumerate_stable(&dominating_set(1, 1), 20)
            .unwrap()
            .is_empty());
        // antipodal pairs of the 6-cycle
        assert_eq!(
            enumerate_stable(&dominating_set(1, 2), 20).unwrap().len(),
            3
        );
    }

    #[test]
    fn default_budget() {
        let p = DominatingSet.generate(&[("length", 3)].into()).unwrap();
        assert_eq!(p, dominating_set(3, 3));
    }
}

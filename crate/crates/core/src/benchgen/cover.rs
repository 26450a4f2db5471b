use super::grids::{torus, Graph};
use super::{BenchError, BenchmarkFamily, Builder, ParamSpec, Resolved};
use crate::program::{Atom, Program, Rule};

/// A vertex cover of at most `budget` vertices of a toroidal grid with an
/// even number of rows. One exists iff `budget >= rows * ceil(cols / 2)`;
/// the default budget is one less.
pub struct VertexCover;

const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "rows",
        help: "grid rows (even, >= 2)",
        default: Some(2),
    },
    ParamSpec {
        name: "cols",
        help: "grid columns (>= 2)",
        default: None,
    },
    ParamSpec {
        name: "budget",
        help: "cover size limit (default rows*ceil(cols/2) - 1)",
        default: None,
    },
];

/// Smallest cover size of the `rows x cols` torus, `rows` even.
pub fn cover_threshold(rows: u64, cols: u64) -> u64 {
    rows * cols.div_ceil(2)
}

impl BenchmarkFamily for VertexCover {
    fn name(&self) -> &'static str {
        "vertex-cover"
    }

    fn description(&self) -> &'static str {
        "vertex cover of a toroidal grid just below the optimum size"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn scale_param(&self) -> &'static str {
        "cols"
    }

    fn build(&self, params: &Resolved<'_>) -> Result<Program, BenchError> {
        let rows = params.at_least("rows", 2)?;
        if rows % 2 != 0 {
            return Err(BenchError::InvalidParam {
                param: "rows",
                reason: format!("must be even, got {rows}"),
            });
        }
        let cols = params.at_least("cols", 2)?;
        let budget = params
            .explicit("budget")
            .unwrap_or(cover_threshold(rows, cols) - 1);
        Ok(vertex_cover(rows as usize, cols as usize, budget))
    }
}

pub fn vertex_cover(rows: usize, cols: usize, budget: u64) -> Program {
    encode(&torus(rows, cols), budget)
}

fn encode(g: &Graph, budget: u64) -> Program {
    let mut b = Builder::new();
    let chosen: Vec<Atom> = (0..g.vertices)
        .map(|v| b.named(format!("in({})", g.labels[v])))
        .collect();
    b.program.push(Rule::choice(chosen.clone(), vec![]));
    let mut edges: Vec<(usize, usize)> =
        g.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    edges.sort_unstable();
    edges.dedup();
    for (u, v) in edges {
        b.integrity(vec![chosen[u].neg(), chosen[v].neg()]);
    }
    b.at_most(budget, chosen.iter().map(|a| a.pos()).collect());
    b.finish()
}

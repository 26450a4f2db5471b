use super::grids::{subdivide, torus, Graph};
use super::{BenchError, BenchmarkFamily, Builder, ParamSpec, Resolved};
use crate::program::{Atom, Literal, Program, Rule};

/// Colour the edges of a toroidal grid black and white so that every
/// vertex has as many black as white edges. One edge is split by an extra
/// vertex, which makes the number of edges odd and the instance
/// unsatisfiable.
pub struct EvenColouring;

const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "rows",
        help: "grid rows (>= 2)",
        default: Some(2),
    },
    ParamSpec {
        name: "cols",
        help: "grid columns (>= 2)",
        default: None,
    },
    ParamSpec {
        name: "subdivide",
        help: "1 to split one edge (default), 0 for the plain torus",
        default: Some(1),
    },
];

impl BenchmarkFamily for EvenColouring {
    fn name(&self) -> &'static str {
        "even-colouring"
    }

    fn description(&self) -> &'static str {
        "balanced black/white edge colouring of a toroidal grid"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn scale_param(&self) -> &'static str {
        "cols"
    }

    fn build(&self, params: &Resolved<'_>) -> Result<Program, BenchError> {
        let rows = params.at_least("rows", 2)?;
        let cols = params.at_least("cols", 2)?;
        let split = params.get("subdivide")? != 0;
        Ok(even_colouring(rows as usize, cols as usize, split))
    }
}

pub fn colouring_graph(rows: usize, cols: usize, split: bool) -> Graph {
    let g = torus(rows, cols);
    if split {
        subdivide(&g, 0, "x")
    } else {
        g
    }
}

pub fn even_colouring(rows: usize, cols: usize, split: bool) -> Program {
    encode(&colouring_graph(rows, cols, split))
}

pub(crate) fn encode(g: &Graph) -> Program {
    let mut b = Builder::new();
    let black: Vec<Atom> = g
        .edges
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| b.named(format!("black({e},{},{})", g.labels[u], g.labels[v])))
        .collect();
    b.program.push(Rule::choice(black.clone(), vec![]));
    for v in 0..g.vertices {
        let edges = g.incident(v);
        let half = g.degree(v) as u64 / 2;
        // A self loop would count twice; the graphs here have none.
        let lits = |negated: bool| -> Vec<Literal> {
            edges
                .iter()
                .map(|&e| Literal {
                    atom: black[e],
                    negated,
                })
                .collect()
        };
        b.at_least(half, lits(false));
        b.at_least(half, lits(true));
    }
    b.finish()
}

use super::{BenchError, BenchmarkFamily, Builder, ParamSpec, Resolved};
use crate::program::{Atom, Program, Rule};

/// `n` pigeons in `m` holes, at most one pigeon per hole. Unsatisfiable
/// for `n > m`; for `n = m` the stable models are the `m!` bijections.
pub struct Pigeonhole;

const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "m",
        help: "holes",
        default: None,
    },
    ParamSpec {
        name: "n",
        help: "pigeons (default m+1)",
        default: None,
    },
];

impl BenchmarkFamily for Pigeonhole {
    fn name(&self) -> &'static str {
        "pigeonhole"
    }

    fn description(&self) -> &'static str {
        "n pigeons in m holes with at most one pigeon per hole"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn scale_param(&self) -> &'static str {
        "m"
    }

    fn build(&self, params: &Resolved<'_>) -> Result<Program, BenchError> {
        let m = params.at_least("m", 1)?;
        let n = params.explicit("n").unwrap_or(m + 1);
        if n == 0 {
            return Err(BenchError::InvalidParam {
                param: "n",
                reason: "must be at least 1".into(),
            });
        }
        Ok(pigeonhole(n as usize, m as usize))
    }
}

pub fn pigeonhole(n: usize, m: usize) -> Program {
    let mut b = Builder::new();
    let place: Vec<Vec<Atom>> = (1..=n)
        .map(|i| (1..=m).map(|j| b.named(format!("p({i},{j})"))).collect())
        .collect();
    b.program.push(Rule::choice(
        place.iter().flatten().copied().collect(),
        vec![],
    ));
    for row in &place {
        b.at_least(1, row.iter().map(|a| a.pos()).collect());
    }
    for j in 0..m {
        b.at_most(1, place.iter().map(|row| row[j].pos()).collect());
    }
    b.finish()
}

//! Generators for crafted benchmark families with known satisfiability.
//!
//! Each family is a [`BenchmarkFamily`] registered by name in a
//! [`FamilyRegistry`]. Parameters are plain non-negative integers given as
//! `key=value` pairs; every family names one of them as the parameter that
//! grows when a series of instances is generated.
//!
//! All programs use atom 1 as the falsum of integrity constraints, which
//! the compute statement forces false.

pub mod colouring;
pub mod cover;
pub mod domination;
pub mod grids;
pub mod pigeonhole;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::program::{Atom, Literal, Program, Rule, WeightRule};

pub use colouring::EvenColouring;
pub use cover::VertexCover;
pub use domination::DominatingSet;
pub use pigeonhole::Pigeonhole;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("unknown benchmark family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` has no parameter `{param}`")]
    UnknownParam { family: &'static str, param: String },
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("parameter `{param}`: {reason}")]
    InvalidParam { param: &'static str, reason: String },
    #[error("malformed parameter list: `{0}` (expected key=value)")]
    Malformed(String),
}

/// A parameter a family accepts.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub help: &'static str,
    /// Value used when the parameter is not given; `None` means required.
    pub default: Option<u64>,
}

/// Parameter values by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params(BTreeMap<String, u64>);

impl Params {
    /// Parses `k=v,k=v`. An empty string gives no parameters.
    pub fn parse(text: &str) -> Result<Params, BenchError> {
        let mut map = BTreeMap::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| BenchError::Malformed(item.to_owned()))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| BenchError::Malformed(item.to_owned()))?;
            map.insert(k.trim().to_owned(), v);
        }
        Ok(Params(map))
    }

    pub fn set(&mut self, name: &str, value: u64) -> &mut Self {
        self.0.insert(name.to_owned(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl<const N: usize> From<[(&str, u64); N]> for Params {
    fn from(pairs: [(&str, u64); N]) -> Self {
        Params(pairs.iter().map(|&(k, v)| (k.to_owned(), v)).collect())
    }
}

/// Resolved parameter values for one family.
pub struct Resolved<'a> {
    specs: &'static [ParamSpec],
    params: &'a Params,
}

impl Resolved<'_> {
    /// Value of `name`, or its default. Panics if `name` is not a declared
    /// parameter.
    pub fn get(&self, name: &'static str) -> Result<u64, BenchError> {
        let spec = self
            .specs
            .iter()
            .find(|s| s.name == name)
            .unwrap_or_else(|| panic!("undeclared parameter {name}"));
        self.params
            .get(name)
            .or(spec.default)
            .ok_or(BenchError::MissingParam(spec.name))
    }

    /// Value of `name` if given explicitly.
    pub fn explicit(&self, name: &str) -> Option<u64> {
        self.params.get(name)
    }

    pub fn at_least(&self, name: &'static str, min: u64) -> Result<u64, BenchError> {
        let v = self.get(name)?;
        if v < min {
            return Err(BenchError::InvalidParam {
                param: name,
                reason: format!("must be at least {min}, got {v}"),
            });
        }
        Ok(v)
    }
}

pub trait BenchmarkFamily: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn params(&self) -> &'static [ParamSpec];

    /// The parameter that `--steps`/`--stride` increase.
    fn scale_param(&self) -> &'static str;

    fn build(&self, params: &Resolved<'_>) -> Result<Program, BenchError>;

    /// Checks parameter names, then builds the program.
    fn generate(&self, params: &Params) -> Result<Program, BenchError> {
        let specs = self.params();
        if let Some((unknown, _)) = params
            .iter()
            .find(|(k, _)| !specs.iter().any(|s| s.name == *k))
        {
            return Err(BenchError::UnknownParam {
                family: self.name(),
                param: unknown.to_owned(),
            });
        }
        self.build(&Resolved { specs, params })
    }
}

/// Benchmark families by name.
pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Box<dyn BenchmarkFamily>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        let mut registry = FamilyRegistry {
            families: BTreeMap::new(),
        };
        registry.register(Box::new(Pigeonhole));
        registry.register(Box::new(EvenColouring));
        registry.register(Box::new(VertexCover));
        registry.register(Box::new(DominatingSet));
        registry
    }
}

impl FamilyRegistry {
    pub fn register(&mut self, family: Box<dyn BenchmarkFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn BenchmarkFamily, BenchError> {
        self.families
            .get(name)
            .map(|f| f.as_ref())
            .ok_or_else(|| BenchError::UnknownFamily(name.to_owned()))
    }

    pub fn families(&self) -> impl Iterator<Item = &dyn BenchmarkFamily> {
        self.families.values().map(|f| f.as_ref())
    }
}

/// Parameter sets for a linearly scaled series: the family's scale
/// parameter starts at its given (or default) value and grows by `stride`.
pub fn series(
    family: &dyn BenchmarkFamily,
    base: &Params,
    steps: u64,
    stride: u64,
) -> Result<Vec<Params>, BenchError> {
    let name = family.scale_param();
    let start = Resolved {
        specs: family.params(),
        params: base,
    }
    .get(name)?;
    Ok((0..steps)
        .map(|k| {
            let mut p = base.clone();
            p.set(name, start + k * stride);
            p
        })
        .collect())
}

/// Numbers atoms in creation order, starting with the falsum at 1.
pub(crate) struct Builder {
    pub program: Program,
    next: u32,
}

impl Builder {
    pub fn new() -> Self {
        let mut program = Program::new();
        program.require_false(Atom::new(1));
        Builder { program, next: 2 }
    }

    pub fn falsum(&self) -> Atom {
        Atom::new(1)
    }

    pub fn atom(&mut self) -> Atom {
        let a = Atom::new(self.next);
        self.next += 1;
        self.program.max_atom = self.program.max_atom.max(a.id());
        a
    }

    pub fn named(&mut self, name: String) -> Atom {
        let a = self.atom();
        self.program.name(a, name);
        a
    }

    pub fn integrity(&mut self, body: Vec<Literal>) {
        let falsum = self.falsum();
        self.program.integrity(falsum, body);
    }

    /// `:- not lo [lits]`: at least `bound` of the literals hold.
    pub fn at_least(&mut self, bound: u64, lits: Vec<Literal>) {
        let guard = self.atom();
        self.program
            .push(Rule::Weight(WeightRule::cardinality(guard, bound, lits)));
        self.integrity(vec![guard.neg()]);
    }

    /// `:- bound+1 [lits]`: at most `bound` of the literals hold.
    pub fn at_most(&mut self, bound: u64, lits: Vec<Literal>) {
        let guard = self.atom();
        self.program.push(Rule::Weight(WeightRule::cardinality(
            guard,
            bound + 1,
            lits,
        )));
        self.integrity(vec![guard.pos()]);
    }

    pub fn finish(self) -> Program {
        self.program
    }
}

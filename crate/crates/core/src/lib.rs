//! Translation of ground answer-set programs in smodels format into
//! pseudo-Boolean theories, plus the tooling around it: OPB output,
//! mapping solver answers back, brute-force oracles and benchmark
//! generators.

pub mod base;
pub mod benchgen;
pub mod mapping;
pub mod opb;
pub mod oracle;
pub mod pb;
pub mod pipeline;
pub mod program;
pub mod record;
pub mod smodels;
pub mod transform;

pub use pipeline::{translate, TranslateError, TranslateOptions, Translation};
pub use program::{Atom, Int, Literal, Program, Rule};

//! OPB output and PB-solver result parsing.
//!
//! Variables are written as `x<id>`. Terms carry an explicit sign and are
//! separated by single spaces; every statement ends in ` ;`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::pb::{positive_form, Objective, PbConstraint, PbTheory, Relation};
use crate::program::{Atom, Int, Literal};

/// How negative coefficients are written.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LiteralStyle {
    /// Plain variables; negative coefficients stay negative.
    #[default]
    Positive,
    /// `-w x` is rewritten to `+w ~x`, moving `w` into the right-hand side.
    Negated,
}

/// Rewrites normalized terms for the chosen style. Returns the terms and
/// the constant `k` such that `sum(original) = sum(rewritten) + k`.
pub fn styled_terms(terms: &[(Int, Literal)], style: LiteralStyle) -> (Vec<(Int, Literal)>, Int) {
    let (positive, mut constant) = positive_form(terms);
    let mut out = Vec::with_capacity(positive.len());
    for (c, atom) in positive {
        if style == LiteralStyle::Negated && c.is_negative() {
            // c*x = |c|*~x + c
            constant += &c;
            out.push((-c, atom.neg()));
        } else {
            out.push((c, atom.pos()));
        }
    }
    (out, constant)
}

/// The objective as it will be written, and the constant dropped from it.
pub fn objective_terms(objective: &Objective, style: LiteralStyle) -> (Vec<(Int, Literal)>, Int) {
    styled_terms(&objective.terms, style)
}

fn push_terms(out: &mut String, terms: &[(Int, Literal)]) {
    for (c, l) in terms {
        let sign = if c.is_negative() { "" } else { "+" };
        let neg = if l.negated { "~" } else { "" };
        write!(out, "{sign}{c} {neg}x{} ", l.atom).unwrap();
    }
}

pub fn write_opb(theory: &PbTheory, objective: Option<&Objective>, style: LiteralStyle) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "* #variable= {} #constraint= {}",
        theory.num_vars,
        theory.constraints.len()
    )
    .unwrap();
    if let Some(objective) = objective {
        let (terms, _) = objective_terms(objective, style);
        out.push_str("min: ");
        push_terms(&mut out, &terms);
        out.push_str(";\n");
    }
    for c in &theory.constraints {
        debug_assert!(c.is_normalized(), "constraint not normalized: {c}");
        let (terms, constant) = styled_terms(&c.terms, style);
        push_terms(&mut out, &terms);
        let rel = match c.relation {
            Relation::Eq => "=",
            _ => ">=",
        };
        writeln!(out, "{rel} {} ;", &c.rhs - constant).unwrap();
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpbError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// `(coefficient, literal)` terms of an objective line.
pub type ObjectiveTerms = Vec<(Int, Literal)>;

/// Reads OPB files as written by [`write_opb`] (and the common subset of
/// the competition format: `*` comments, `min:`, `>=`, `<=`, `=`, `~x`).
pub fn read_opb(text: &str) -> Result<(PbTheory, Option<ObjectiveTerms>), OpbError> {
    let mut theory = PbTheory::default();
    let mut declared_vars = None;
    let mut objective = None;
    let mut max_var = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let bad = |message: String| OpbError::Malformed { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('*') {
            let mut words = comment.split_whitespace();
            while let Some(w) = words.next() {
                if w == "#variable=" {
                    declared_vars = words.next().and_then(|n| n.parse::<u32>().ok());
                }
            }
            continue;
        }
        let body = trimmed
            .strip_suffix(';')
            .ok_or_else(|| bad("missing `;`".into()))?
            .trim();
        let (is_objective, body) = match body.strip_prefix("min:") {
            Some(rest) => (true, rest.trim()),
            None => (false, body),
        };
        let mut tokens: Vec<&str> = body.split_whitespace().collect();
        let mut relation = None;
        let mut rhs = Int::zero();
        if !is_objective {
            if tokens.len() < 2 {
                return Err(bad("expected `<terms> <rel> <rhs>`".into()));
            }
            rhs = Int::from_str(tokens.pop().unwrap())
                .map_err(|_| bad("bad right-hand side".into()))?;
            relation = Some(match tokens.pop().unwrap() {
                ">=" => Relation::Ge,
                "<=" => Relation::Le,
                "=" => Relation::Eq,
                other => return Err(bad(format!("unknown relation `{other}`"))),
            });
        }
        if !tokens.len().is_multiple_of(2) {
            return Err(bad("terms must be `<coeff> <var>` pairs".into()));
        }
        let mut terms = Vec::with_capacity(tokens.len() / 2);
        for pair in tokens.chunks(2) {
            let coeff = Int::from_str(pair[0].trim_start_matches('+'))
                .map_err(|_| bad(format!("bad coefficient `{}`", pair[0])))?;
            let (negated, var) = match pair[1].strip_prefix('~') {
                Some(v) => (true, v),
                None => (false, pair[1]),
            };
            let id = var
                .strip_prefix('x')
                .and_then(|n| n.parse::<u32>().ok())
                .and_then(Atom::try_new)
                .ok_or_else(|| bad(format!("bad variable `{}`", pair[1])))?;
            max_var = max_var.max(id.id());
            terms.push((coeff, Literal { atom: id, negated }));
        }
        match relation {
            None => objective = Some(terms),
            Some(relation) => theory.push(PbConstraint {
                terms,
                relation,
                rhs,
            }),
        }
    }
    theory.num_vars = declared_vars.unwrap_or(max_var);
    Ok((theory, objective))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverStatus {
    Satisfiable,
    OptimumFound,
    Unsatisfiable,
    Unknown,
}

impl SolverStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverStatus::Satisfiable => "SATISFIABLE",
            SolverStatus::OptimumFound => "OPTIMUM FOUND",
            SolverStatus::Unsatisfiable => "UNSATISFIABLE",
            SolverStatus::Unknown => "UNKNOWN",
        }
    }

    pub fn has_model(self) -> bool {
        matches!(self, SolverStatus::Satisfiable | SolverStatus::OptimumFound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverOutput {
    pub status: SolverStatus,
    /// Present iff the status reports a model.
    pub assignment: Option<BTreeMap<Atom, bool>>,
    /// Value of the last `o` line.
    pub best_value: Option<Int>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverOutputError {
    #[error("no `s` status line in solver output")]
    MissingStatus,
    #[error("line {line}: unknown status `{status}`")]
    UnknownStatus { line: usize, status: String },
    #[error("line {line}: bad value token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: variable x{atom} assigned both values")]
    Contradiction { line: usize, atom: Atom },
    #[error("line {line}: bad objective value `{value}`")]
    BadObjective { line: usize, value: String },
}

/// Parses `s`, `v` and `o` lines; other lines are ignored.
pub fn parse_solver_output(text: &str) -> Result<SolverOutput, SolverOutputError> {
    let mut status = None;
    let mut values: BTreeMap<Atom, bool> = BTreeMap::new();
    let mut best_value = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim_end();
        if let Some(rest) = raw.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => SolverStatus::Satisfiable,
                "OPTIMUM FOUND" => SolverStatus::OptimumFound,
                "UNSATISFIABLE" => SolverStatus::Unsatisfiable,
                "UNKNOWN" => SolverStatus::Unknown,
                other => {
                    return Err(SolverOutputError::UnknownStatus {
                        line,
                        status: other.to_owned(),
                    })
                }
            });
        } else if let Some(rest) =
            raw.strip_prefix("v ")
                .or(if raw == "v" { Some("") } else { None })
        {
            for token in rest.split_whitespace() {
                let (value, var) = match token.strip_prefix('-').or_else(|| token.strip_prefix('~'))
                {
                    Some(v) => (false, v),
                    None => (true, token),
                };
                let atom = var
                    .strip_prefix('x')
                    .and_then(|n| n.parse::<u32>().ok())
                    .and_then(Atom::try_new)
                    .ok_or_else(|| SolverOutputError::BadToken {
                        line,
                        token: token.to_owned(),
                    })?;
                if let Some(&previous) = values.get(&atom) {
                    if previous != value {
                        return Err(SolverOutputError::Contradiction { line, atom });
                    }
                }
                values.insert(atom, value);
            }
        } else if let Some(rest) = raw.strip_prefix("o ") {
            let value = rest.trim();
            best_value =
                Some(
                    Int::from_str(value).map_err(|_| SolverOutputError::BadObjective {
                        line,
                        value: value.to_owned(),
                    })?,
                );
        }
    }
    let status = status.ok_or(SolverOutputError::MissingStatus)?;
    Ok(SolverOutput {
        status,
        assignment: status.has_model().then_some(values),
        best_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pb::{normalize, ObjectiveLevel};

    fn a(id: u32) -> Atom {
        Atom::new(id)
    }

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    #[test]
    fn golden_single_clause() {
        let mut theory = PbTheory::new(2);
        theory.push(PbConstraint::new(
            vec![(int(1), a(1).pos()), (int(1), a(2).pos())],
            Relation::Ge,
            1,
        ));
        assert_eq!(
            write_opb(&theory, None, LiteralStyle::Positive),
            "* #variable= 2 #constraint= 1\n+1 x1 +1 x2 >= 1 ;\n"
        );
    }

    #[test]
    fn golden_objective_line() {
        let objective = Objective {
            terms: vec![(int(4), a(1).pos()), (int(1), a(2).pos())],
            levels: vec![ObjectiveLevel {
                priority: 0,
                multiplier: int(1),
                max_value: int(5),
            }],
        };
        let text = write_opb(&PbTheory::new(2), Some(&objective), LiteralStyle::Positive);
        assert_eq!(text.lines().nth(1), Some("min: +4 x1 +1 x2 ;"));
    }

    #[test]
    fn golden_empty_theory() {
        assert_eq!(
            write_opb(&PbTheory::default(), None, LiteralStyle::Positive),
            "* #variable= 0 #constraint= 0\n"
        );
    }

    #[test]
    fn negated_style_rewrites_negative_coefficients() {
        let mut theory = PbTheory::new(2);
        // x1 - x2 >= 0  is  x1 + ~x2 >= 1
        theory.push(normalize(&PbConstraint::new(
            vec![(int(1), a(1).pos()), (int(1), a(2).neg())],
            Relation::Ge,
            1,
        )));
        assert_eq!(
            write_opb(&theory, None, LiteralStyle::Positive),
            "* #variable= 2 #constraint= 1\n+1 x1 -1 x2 >= 0 ;\n"
        );
        assert_eq!(
            write_opb(&theory, None, LiteralStyle::Negated),
            "* #variable= 2 #constraint= 1\n+1 x1 +1 ~x2 >= 1 ;\n"
        );
    }

    #[test]
    fn objective_with_negated_literal_reports_offset() {
        let objective = Objective {
            terms: vec![(int(3), a(1).neg())],
            levels: vec![],
        };
        let (terms, offset) = objective_terms(&objective, LiteralStyle::Positive);
        assert_eq!(terms, vec![(int(-3), a(1).pos())]);
        assert_eq!(offset, int(3));
        let (terms, offset) = objective_terms(&objective, LiteralStyle::Negated);
        assert_eq!(terms, vec![(int(3), a(1).neg())]);
        assert_eq!(offset, int(0));
    }

    #[test]
    fn reader_roundtrip() {
        let mut theory = PbTheory::new(3);
        theory.push(PbConstraint::new(
            vec![(int(-1), a(1).pos()), (int(5), a(3).pos())],
            Relation::Ge,
            -1,
        ));
        theory.push(PbConstraint::new(
            vec![(int(2), a(2).pos())],
            Relation::Eq,
            2,
        ));
        theory.push(PbConstraint::new(vec![], Relation::Ge, 1));
        let objective = Objective {
            terms: vec![(int(7), a(2).pos())],
            levels: vec![],
        };
        let text = write_opb(&theory, Some(&objective), LiteralStyle::Positive);
        let (read, obj) = read_opb(&text).unwrap();
        assert_eq!(read, theory);
        assert_eq!(obj, Some(objective.terms));
    }

    #[test]
    fn unsat_status() {
        let out = parse_solver_output("s UNSATISFIABLE\n").unwrap();
        assert_eq!(out.status, SolverStatus::Unsatisfiable);
        assert_eq!(out.assignment, None);
    }

    #[test]
    fn optimum_with_values() {
        let out = parse_solver_output("o 9\ns OPTIMUM FOUND\nv x1 -x2\n").unwrap();
        assert_eq!(out.best_value, Some(int(9)));
        assert_eq!(
            out.assignment,
            Some(BTreeMap::from([(a(1), true), (a(2), false)]))
        );
    }

    #[test]
    fn multi_line_values_and_noise() {
        let text = "c roundingsat\no 12\no 7\ns SATISFIABLE\nv x1 -x2\nv -x3 x4\nc done\n";
        let out = parse_solver_output(text).unwrap();
        assert_eq!(out.best_value, Some(int(7)));
        assert_eq!(out.assignment.unwrap().len(), 4);
    }

    #[test]
    fn solver_output_errors() {
        assert_eq!(
            parse_solver_output("s SATISFIABLE\nv x1 -x1\n"),
            Err(SolverOutputError::Contradiction {
                line: 2,
                atom: a(1)
            })
        );
        assert_eq!(
            parse_solver_output("v x1\n"),
            Err(SolverOutputError::MissingStatus)
        );
        assert!(matches!(
            parse_solver_output("s SATISFIABLE\nv y1\n"),
            Err(SolverOutputError::BadToken { .. })
        ));
    }
}

//! Reader and writer for the Lparse/Smodels intermediate format.
//!
//! ```text
//! 1 h n m  neg... pos...                 basic rule
//! 2 h n m  bound neg... pos...           constraint rule
//! 3 k h1..hk n m neg... pos...           choice rule
//! 5 h bound n m neg... pos... w1..wn     weight rule
//! 6 0 n m neg... pos... w1..wn           minimize statement
//! 8 k h1..hk n m neg... pos...           disjunctive rule
//! 0
//! <atom> <name>                          symbol table
//! 0
//! B+
//! <atom>...
//! 0
//! B-
//! <atom>...
//! 0
//! <models>
//! ```
//!
//! Each rule sits on its own line. The writer emits one rule per line and
//! lists negative literals before positive ones, as the format requires.

use std::fmt::Write as _;
use std::io::Read;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::program::{
    Atom, BasicRule, ChoiceRule, DisjunctiveRule, Int, Literal, MinimizeStatement, Program, Rule,
    WeightRule, WeightedLiteral,
};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: input ends inside the {section}")]
    Truncated { line: usize, section: &'static str },
    #[error("line {line}: expected an integer, found `{token}`")]
    NotAnInteger { line: usize, token: String },
    #[error("line {line}: negative {what} `{token}`")]
    Negative {
        line: usize,
        what: &'static str,
        token: String,
    },
    #[error("line {line}: unknown rule type {code}")]
    UnknownRuleType { line: usize, code: String },
    #[error("line {line}: invalid counts (n = {n}, m = {m})")]
    InvalidCounts { line: usize, n: usize, m: usize },
    #[error("line {line}: weight rule lists {literals} literals but {weights} weights")]
    WeightCountMismatch {
        line: usize,
        literals: usize,
        weights: usize,
    },
    #[error("line {line}: atom id 0 is not a valid atom")]
    ZeroAtom { line: usize },
    #[error("line {line}: atom id `{token}` out of range")]
    AtomOutOfRange { line: usize, token: String },
    #[error("line {line}: unexpected `{found}`, expected {expected}")]
    Unexpected {
        line: usize,
        found: String,
        expected: &'static str,
    },
    #[error("line {line}: symbol table entry without a name")]
    MissingName { line: usize },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub fn parse_program<R: Read>(mut reader: R) -> Result<Program, ParseError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_str(&text)
}

pub fn parse_str(input: &str) -> Result<Program, ParseError> {
    Parser::new(input).program()
}

struct Parser<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last_line: usize,
}

/// Tokens of a single line.
struct LineTokens<'a> {
    line: usize,
    tokens: std::str::SplitAsciiWhitespace<'a>,
    section: &'static str,
}

impl<'a> LineTokens<'a> {
    fn next(&mut self) -> Result<&'a str, ParseError> {
        self.tokens.next().ok_or(ParseError::Truncated {
            line: self.line,
            section: self.section,
        })
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let token = self.next()?;
        BigInt::from_str(token).map_err(|_| ParseError::NotAnInteger {
            line: self.line,
            token: token.to_owned(),
        })
    }

    fn count(&mut self, what: &'static str) -> Result<usize, ParseError> {
        let token = self.next()?;
        parse_unsigned(token, self.line, what)
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let token = self.next()?;
        parse_atom(token, self.line)
    }

    fn atoms(&mut self, count: usize) -> Result<Vec<Atom>, ParseError> {
        (0..count).map(|_| self.atom()).collect()
    }

    /// `n m neg... pos...`
    fn body(&mut self) -> Result<Vec<Literal>, ParseError> {
        let n = self.count("literal count")?;
        let m = self.count("negative literal count")?;
        self.literals(n, m)
    }

    fn literals(&mut self, n: usize, m: usize) -> Result<Vec<Literal>, ParseError> {
        if m > n {
            return Err(ParseError::InvalidCounts {
                line: self.line,
                n,
                m,
            });
        }
        let mut body = Vec::with_capacity(n);
        for i in 0..n {
            let atom = self.atom()?;
            body.push(if i < m { atom.neg() } else { atom.pos() });
        }
        Ok(body)
    }

    fn weights(&mut self, literals: &[Literal]) -> Result<Vec<WeightedLiteral>, ParseError> {
        let rest: Vec<&str> = self.tokens.by_ref().collect();
        if rest.len() != literals.len() {
            return Err(ParseError::WeightCountMismatch {
                line: self.line,
                literals: literals.len(),
                weights: rest.len(),
            });
        }
        literals
            .iter()
            .zip(rest)
            .map(|(&literal, token)| {
                let weight = BigInt::from_str(token).map_err(|_| ParseError::NotAnInteger {
                    line: self.line,
                    token: token.to_owned(),
                })?;
                if weight.is_negative() {
                    return Err(ParseError::Negative {
                        line: self.line,
                        what: "weight",
                        token: token.to_owned(),
                    });
                }
                Ok(WeightedLiteral { weight, literal })
            })
            .collect()
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.tokens.next() {
            None => Ok(()),
            Some(found) => Err(ParseError::Unexpected {
                line: self.line,
                found: found.to_owned(),
                expected: "end of rule line",
            }),
        }
    }
}

fn parse_unsigned(token: &str, line: usize, what: &'static str) -> Result<usize, ParseError> {
    let value = BigInt::from_str(token).map_err(|_| ParseError::NotAnInteger {
        line,
        token: token.to_owned(),
    })?;
    if value.is_negative() {
        return Err(ParseError::Negative {
            line,
            what,
            token: token.to_owned(),
        });
    }
    usize::try_from(value).map_err(|_| ParseError::AtomOutOfRange {
        line,
        token: token.to_owned(),
    })
}

fn parse_atom(token: &str, line: usize) -> Result<Atom, ParseError> {
    let value = parse_unsigned(token, line, "atom id")?;
    let id = u32::try_from(value).map_err(|_| ParseError::AtomOutOfRange {
        line,
        token: token.to_owned(),
    })?;
    Atom::try_new(id).ok_or(ParseError::ZeroAtom { line })
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            lines: input.lines().enumerate().peekable(),
            last_line: 0,
        }
    }

    /// Next non-blank line, 1-based line number.
    fn next_line(&mut self, section: &'static str) -> Result<(usize, &'a str), ParseError> {
        for (idx, line) in self.lines.by_ref() {
            self.last_line = idx + 1;
            if !line.trim().is_empty() {
                return Ok((idx + 1, line));
            }
        }
        Err(ParseError::Truncated {
            line: self.last_line,
            section,
        })
    }

    fn program(mut self) -> Result<Program, ParseError> {
        let mut program = Program::new();
        let mut minimize_count = 0;

        loop {
            let (line, text) = self.next_line("rule section")?;
            let mut tokens = LineTokens {
                line,
                tokens: text.split_ascii_whitespace(),
                section: "rule",
            };
            let code = tokens.next()?;
            let rule = match code {
                "0" => {
                    tokens.finish()?;
                    break;
                }
                "1" => {
                    let head = tokens.atom()?;
                    let body = tokens.body()?;
                    Rule::Basic(BasicRule { head, body })
                }
                "2" => {
                    let head = tokens.atom()?;
                    let n = tokens.count("literal count")?;
                    let m = tokens.count("negative literal count")?;
                    let bound = tokens.int()?;
                    let literals = tokens.literals(n, m)?;
                    Rule::Weight(WeightRule::cardinality(head, bound, literals))
                }
                "3" | "8" => {
                    let k = tokens.count("head count")?;
                    if k == 0 {
                        return Err(ParseError::InvalidCounts { line, n: 0, m: 0 });
                    }
                    let heads = tokens.atoms(k)?;
                    let body = tokens.body()?;
                    if code == "3" {
                        Rule::Choice(ChoiceRule { heads, body })
                    } else {
                        Rule::Disjunctive(DisjunctiveRule { heads, body })
                    }
                }
                "5" => {
                    let head = tokens.atom()?;
                    let bound = tokens.int()?;
                    let literals = tokens.body()?;
                    let terms = tokens.weights(&literals)?;
                    Rule::Weight(WeightRule {
                        head,
                        bound,
                        terms,
                        cardinality: false,
                    })
                }
                "6" => {
                    let zero = tokens.next()?;
                    if zero != "0" {
                        return Err(ParseError::Unexpected {
                            line,
                            found: zero.to_owned(),
                            expected: "0 after minimize type",
                        });
                    }
                    let literals = tokens.body()?;
                    let terms = tokens.weights(&literals)?;
                    minimize_count += 1;
                    Rule::Minimize(MinimizeStatement {
                        priority: minimize_count - 1,
                        terms,
                    })
                }
                other => {
                    if BigInt::from_str(other).is_err() {
                        return Err(ParseError::NotAnInteger {
                            line,
                            token: other.to_owned(),
                        });
                    }
                    return Err(ParseError::UnknownRuleType {
                        line,
                        code: other.to_owned(),
                    });
                }
            };
            tokens.finish()?;
            program.push(rule);
        }

        loop {
            let (line, text) = self.next_line("symbol table")?;
            let text = text.trim_start();
            let (id, name) = match text.split_once(|c: char| c.is_ascii_whitespace()) {
                Some((id, name)) => (id, name.trim()),
                None => (text.trim_end(), ""),
            };
            if id == "0" && name.is_empty() {
                break;
            }
            let atom = parse_atom(id, line)?;
            if name.is_empty() {
                return Err(ParseError::MissingName { line });
            }
            program.name(atom, name);
        }

        let compute_true = self.compute_section("B+")?;
        let compute_false = self.compute_section("B-")?;
        for atom in compute_true {
            program.require_true(atom);
        }
        for atom in compute_false {
            program.require_false(atom);
        }

        let (line, text) = self.next_line("models line")?;
        let mut tokens = LineTokens {
            line,
            tokens: text.split_ascii_whitespace(),
            section: "models line",
        };
        let models = tokens.count("models count")?;
        program.models = models as u64;
        tokens.finish()?;
        if let Ok((line, text)) = self.next_line("end") {
            return Err(ParseError::Unexpected {
                line,
                found: text.trim().to_owned(),
                expected: "end of input",
            });
        }
        Ok(program)
    }

    fn compute_section(&mut self, header: &'static str) -> Result<Vec<Atom>, ParseError> {
        let (line, text) = self.next_line("compute statement")?;
        if text.trim() != header {
            return Err(ParseError::Unexpected {
                line,
                found: text.trim().to_owned(),
                expected: if header == "B+" { "B+" } else { "B-" },
            });
        }
        let mut atoms = Vec::new();
        loop {
            let (line, text) = self.next_line("compute statement")?;
            for token in text.split_ascii_whitespace() {
                if token == "0" {
                    return Ok(atoms);
                }
                atoms.push(parse_atom(token, line)?);
            }
        }
    }
}

/// Splits a body into (negative, positive) atoms, keeping relative order.
fn split_body(body: &[Literal]) -> (Vec<Atom>, Vec<Atom>) {
    let neg = body.iter().filter(|l| l.negated).map(|l| l.atom).collect();
    let pos = body.iter().filter(|l| !l.negated).map(|l| l.atom).collect();
    (neg, pos)
}

fn push_body(out: &mut String, body: &[Literal]) {
    let (neg, pos) = split_body(body);
    write!(out, " {} {}", neg.len() + pos.len(), neg.len()).unwrap();
    for atom in neg.iter().chain(&pos) {
        write!(out, " {atom}").unwrap();
    }
}

/// Weighted terms in the order the format lists them: negatives first.
fn ordered_terms(terms: &[WeightedLiteral]) -> Vec<&WeightedLiteral> {
    terms
        .iter()
        .filter(|t| t.literal.negated)
        .chain(terms.iter().filter(|t| !t.literal.negated))
        .collect()
}

fn push_weighted(out: &mut String, terms: &[WeightedLiteral]) {
    let ordered = ordered_terms(terms);
    let body: Vec<Literal> = ordered.iter().map(|t| t.literal).collect();
    push_body(out, &body);
    for t in ordered {
        write!(out, " {}", t.weight).unwrap();
    }
}

fn is_unit_weighted(terms: &[WeightedLiteral]) -> bool {
    let one = Int::from(1);
    terms.iter().all(|t| t.weight == one)
}

pub fn write_program(program: &Program) -> String {
    let mut out = String::new();
    for rule in &program.rules {
        match rule {
            Rule::Basic(r) => {
                write!(out, "1 {}", r.head).unwrap();
                push_body(&mut out, &r.body);
            }
            Rule::Weight(r) if r.cardinality && is_unit_weighted(&r.terms) => {
                let (neg, pos) = split_body(&r.terms.iter().map(|t| t.literal).collect::<Vec<_>>());
                write!(
                    out,
                    "2 {} {} {} {}",
                    r.head,
                    neg.len() + pos.len(),
                    neg.len(),
                    r.bound
                )
                .unwrap();
                for atom in neg.iter().chain(&pos) {
                    write!(out, " {atom}").unwrap();
                }
            }
            Rule::Weight(r) => {
                write!(out, "5 {} {}", r.head, r.bound).unwrap();
                push_weighted(&mut out, &r.terms);
            }
            Rule::Choice(r) => {
                write!(out, "3 {}", r.heads.len()).unwrap();
                for h in &r.heads {
                    write!(out, " {h}").unwrap();
                }
                push_body(&mut out, &r.body);
            }
            Rule::Disjunctive(r) => {
                write!(out, "8 {}", r.heads.len()).unwrap();
                for h in &r.heads {
                    write!(out, " {h}").unwrap();
                }
                push_body(&mut out, &r.body);
            }
            Rule::Minimize(m) => {
                out.push_str("6 0");
                push_weighted(&mut out, &m.terms);
            }
        }
        out.push('\n');
    }
    out.push_str("0\n");
    for (atom, name) in &program.symbols {
        writeln!(out, "{atom} {name}").unwrap();
    }
    out.push_str("0\nB+\n");
    for atom in &program.compute_true {
        writeln!(out, "{atom}").unwrap();
    }
    out.push_str("0\nB-\n");
    for atom in &program.compute_false {
        writeln!(out, "{atom}").unwrap();
    }
    writeln!(out, "0\n{}", program.models).unwrap();
    out
}

//! `asp2pb`: translate smodels programs to OPB, map solver answers back,
//! and generate benchmark instances.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use asp2pb_core::benchgen::{series, BenchError, FamilyRegistry, Params};
use asp2pb_core::mapping::{check_stable, decode_objective, to_answer_set, MappingError};
use asp2pb_core::opb::{
    parse_solver_output, write_opb, LiteralStyle, SolverOutput, SolverOutputError,
};
use asp2pb_core::oracle::{check_bijection, enumerate_stable, OracleError, OracleLimits};
use asp2pb_core::pb::MinOrder;
use asp2pb_core::program::RecursiveAggregate;
use asp2pb_core::record::{RecordError, TranslationRecord};
use asp2pb_core::smodels::{parse_program, write_program, ParseError};
use asp2pb_core::transform::TransformError;
use asp2pb_core::{translate, Program, TranslateError, TranslateOptions};

mod exit {
    pub const IO: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const NOT_HCF: u8 = 4;
    pub const RECURSIVE_AGGREGATE: u8 = 5;
    pub const ANSWER: u8 = 6;
    pub const VERIFY_FAILED: u8 = 7;
    pub const ORACLE_LIMIT: u8 = 8;
}

#[derive(Parser)]
#[command(
    name = "asp2pb",
    version,
    about = "Ground ASP programs (smodels format) to pseudo-Boolean OPB"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Translate a smodels program into an OPB theory.
    Translate(TranslateArgs),
    /// Map PB solver output back to an answer set.
    MapAnswer(MapArgs),
    /// Generate benchmark instances in smodels format.
    Benchgen(BenchArgs),
    /// Enumerate stable models by brute force (small programs only).
    Oracle(OracleArgs),
}

#[derive(Args)]
struct TranslateArgs {
    /// smodels input; standard input if absent or `-`.
    input: Option<PathBuf>,
    /// OPB output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Translation record file (default: `<out>.record` when --out is given).
    #[arg(long)]
    record: Option<PathBuf>,
    /// Which minimize statement is most significant.
    #[arg(long, default_value = "last", value_parser = parse_min_order)]
    min_order: MinOrder,
    /// Write negative coefficients as positive ones on negated literals.
    #[arg(long)]
    opb_negated_literals: bool,
    /// Run this solver on the OPB file and print the mapped answer.
    #[arg(long, value_name = "CMD")]
    solve: Option<String>,
    #[arg(long, default_value = "strong", hide = true)]
    ranking: String,
}

#[derive(Args)]
struct MapArgs {
    /// Translation record written by `translate`.
    #[arg(long)]
    record: PathBuf,
    /// Solver output; standard input if absent or `-`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Check the answer set against the original program.
    #[arg(long, requires = "program")]
    verify: bool,
    /// Original smodels program, for --verify.
    #[arg(long)]
    program: Option<PathBuf>,
    /// Also print true atoms without a name, as `#<id>`.
    #[arg(long)]
    unnamed: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark family; `list` prints the available ones.
    family: String,
    /// Parameters as `key=value,key=value`.
    #[arg(long, default_value = "")]
    params: String,
    /// Output file, or directory when --steps is given.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Generate a series of this many instances.
    #[arg(long, requires = "out")]
    steps: Option<u64>,
    /// Increment of the family's scale parameter between instances.
    #[arg(long, default_value_t = 1, requires = "steps")]
    stride: u64,
}

#[derive(Args)]
struct OracleArgs {
    /// smodels input; standard input if absent or `-`.
    input: Option<PathBuf>,
    /// Refuse programs with more atoms than this.
    #[arg(long, default_value_t = 20)]
    max_oracle_atoms: usize,
    /// Also translate and compare the PB models with the stable models.
    #[arg(long)]
    check: bool,
}

fn parse_min_order(s: &str) -> Result<MinOrder, String> {
    s.parse()
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .context("reading standard input")?;
            Ok(buf)
        }
    }
}

fn read_program(path: Option<&Path>) -> Result<Program> {
    let bytes = read_input(path)?;
    let name = path.map_or("<stdin>".into(), |p| p.display().to_string());
    parse_program(bytes.as_slice()).with_context(|| format!("parsing {name}"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn translate_cmd(args: TranslateArgs) -> Result<u8> {
    let program = read_program(args.input.as_deref())?;
    let opts = TranslateOptions {
        min_order: args.min_order,
        ranking: args.ranking,
        style: if args.opb_negated_literals {
            LiteralStyle::Negated
        } else {
            LiteralStyle::Positive
        },
        skip_cwa: false,
    };
    let t = translate(&program, &opts)?;
    let opb = write_opb(&t.theory, t.objective.as_ref(), opts.style);
    let sidecar = t.record.to_sidecar();

    let record_path = args
        .record
        .clone()
        .or_else(|| args.out.as_ref().map(|o| with_suffix(o, ".record")));
    if let Some(path) = &record_path {
        write_file(path, &sidecar)?;
    }

    let Some(solver) = args.solve else {
        match &args.out {
            Some(path) => write_file(path, &opb)?,
            None => io::stdout().write_all(opb.as_bytes())?,
        }
        return Ok(0);
    };

    let opb_path = match &args.out {
        Some(path) => path.clone(),
        None => std::env::temp_dir().join(format!("asp2pb-{}.opb", std::process::id())),
    };
    write_file(&opb_path, &opb)?;
    let result = run_solver(&solver, &opb_path);
    if args.out.is_none() {
        let _ = fs::remove_file(&opb_path);
    }
    let out = result?;
    let mut stdout = io::stdout().lock();
    report_answer(&mut stdout, &out, &t.record, false)?;
    Ok(0)
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn run_solver(cmd: &str, opb: &Path) -> Result<SolverOutput> {
    let mut parts = cmd.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| anyhow!("empty --solve command"))?;
    let output = Command::new(program)
        .args(parts)
        .arg(opb)
        .output()
        .with_context(|| format!("running solver `{cmd}`"))?;
    let text = String::from_utf8_lossy(&output.stdout);
    Ok(parse_solver_output(&text)?)
}

fn report_answer(
    out: &mut impl Write,
    solver: &SolverOutput,
    record: &TranslationRecord,
    unnamed: bool,
) -> Result<Option<BTreeSet<asp2pb_core::Atom>>> {
    writeln!(out, "s {}", solver.status.as_str())?;
    if !solver.status.has_model() {
        return Ok(None);
    }
    let answer = to_answer_set(solver, record)?;
    writeln!(out, "Answer: {}", answer.render(unnamed).join(" "))?;
    if let (Some(value), false) = (&solver.best_value, record.levels.is_empty()) {
        let flat: BigInt = value + &record.objective_offset;
        let levels = decode_objective(&flat, &record.levels)?;
        let values: Vec<String> = levels.iter().map(|(_, v)| v.to_string()).collect();
        writeln!(out, "Optimization: {}", values.join(" "))?;
    }
    Ok(Some(answer.atoms))
}

fn map_cmd(args: MapArgs) -> Result<u8> {
    let text = fs::read_to_string(&args.record)
        .with_context(|| format!("reading record {}", args.record.display()))?;
    let record = TranslationRecord::from_sidecar(&text)
        .with_context(|| format!("parsing record {}", args.record.display()))?;
    let solver_text = String::from_utf8(read_input(args.input.as_deref())?)
        .context("solver output is not UTF-8")?;
    let solver = parse_solver_output(&solver_text)?;

    let mut stdout = io::stdout().lock();
    let answer = report_answer(&mut stdout, &solver, &record, args.unnamed)?;
    if !args.verify {
        return Ok(0);
    }
    let Some(candidate) = answer else {
        writeln!(stdout, "verify: SKIPPED (no model)")?;
        return Ok(0);
    };
    let program = read_program(args.program.as_deref())?;
    if check_stable(&program, &candidate)? {
        writeln!(stdout, "verify: PASS")?;
        Ok(0)
    } else {
        writeln!(stdout, "verify: FAIL")?;
        Ok(exit::VERIFY_FAILED)
    }
}

fn bench_cmd(args: BenchArgs) -> Result<u8> {
    let registry = FamilyRegistry::default();
    if args.family == "list" {
        for f in registry.families() {
            println!("{}: {}", f.name(), f.description());
            for p in f.params() {
                let default = p
                    .default
                    .map(|d| format!(" [default {d}]"))
                    .unwrap_or_default();
                println!("    {} - {}{default}", p.name, p.help);
            }
        }
        return Ok(0);
    }
    let family = registry.get(&args.family)?;
    let params = Params::parse(&args.params)?;

    let Some(steps) = args.steps else {
        let text = write_program(&family.generate(&params)?);
        match &args.out {
            Some(path) => write_file(path, &text)?,
            None => io::stdout().write_all(text.as_bytes())?,
        }
        return Ok(0);
    };
    let dir = args.out.expect("clap enforces --out with --steps");
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let scale = family.scale_param();
    for p in series(family, &params, steps, args.stride)? {
        let value = p.get(scale).expect("series sets the scale parameter");
        let path = dir.join(format!("{}-{scale}{value}.smodels", family.name()));
        write_file(&path, &write_program(&family.generate(&p)?))?;
        println!("{}", path.display());
    }
    Ok(0)
}

fn oracle_cmd(args: OracleArgs) -> Result<u8> {
    let program = read_program(args.input.as_deref())?;
    let models = enumerate_stable(&program, args.max_oracle_atoms)?;
    let mut stdout = io::stdout().lock();
    for (k, m) in models.iter().enumerate() {
        let names: Vec<String> = m
            .iter()
            .map(|a| {
                program
                    .symbols
                    .get(a)
                    .cloned()
                    .unwrap_or_else(|| format!("#{a}"))
            })
            .collect();
        writeln!(stdout, "Answer {}: {}", k + 1, names.join(" "))?;
    }
    writeln!(stdout, "Models: {}", models.len())?;
    if args.check {
        let t = translate(&program, &TranslateOptions::default())?;
        let limits = OracleLimits {
            max_atoms: args.max_oracle_atoms,
            ..OracleLimits::default()
        };
        let report = check_bijection(&program, &t.theory, &t.record, &limits)?;
        if report.is_bijection() {
            writeln!(stdout, "check: PASS ({} PB models)", report.pb_count)?;
        } else {
            writeln!(stdout, "check: FAIL {report:?}")?;
            return Ok(exit::VERIFY_FAILED);
        }
    }
    Ok(0)
}

/// Exit code for an error, by the first recognised cause in its chain.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<TranslateError>() {
            return match e {
                TranslateError::Transform(_) => exit::NOT_HCF,
                TranslateError::RecursiveAggregate(_) => exit::RECURSIVE_AGGREGATE,
                TranslateError::UnknownRanking(_) => exit::USAGE,
            };
        }
        if let Some(e) = cause.downcast_ref::<MappingError>() {
            return match e {
                MappingError::Transform(_) => exit::NOT_HCF,
                MappingError::RecursiveAggregate(_) => exit::RECURSIVE_AGGREGATE,
                _ => exit::ANSWER,
            };
        }
        if cause.is::<TransformError>() {
            return exit::NOT_HCF;
        }
        if cause.is::<RecursiveAggregate>() {
            return exit::RECURSIVE_AGGREGATE;
        }
        if let Some(e) = cause.downcast_ref::<ParseError>() {
            return if matches!(e, ParseError::Io(_)) {
                exit::IO
            } else {
                exit::PARSE
            };
        }
        if cause.is::<RecordError>() || cause.is::<SolverOutputError>() {
            return exit::ANSWER;
        }
        if cause.is::<BenchError>() {
            return exit::USAGE;
        }
        if cause.is::<OracleError>() {
            return exit::ORACLE_LIMIT;
        }
        if cause.is::<io::Error>() {
            return exit::IO;
        }
    }
    exit::IO
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Translate(a) => translate_cmd(a),
        Cmd::MapAnswer(a) => map_cmd(a),
        Cmd::Benchgen(a) => bench_cmd(a),
        Cmd::Oracle(a) => oracle_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("asp2pb: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

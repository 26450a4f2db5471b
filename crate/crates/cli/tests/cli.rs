use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use asp2pb_core::benchgen::pigeonhole::pigeonhole;
use asp2pb_core::opb::read_opb;
use asp2pb_core::oracle::{enumerate_pb_models, OracleLimits};
use asp2pb_core::pb::{PbConstraint, PbTheory};
use asp2pb_core::program::{Atom, Rule, WeightRule, WeightedLiteral};
use asp2pb_core::smodels::write_program;
use asp2pb_core::Program;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_asp2pb"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn a(id: u32) -> Atom {
    Atom::new(id)
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

/// `s`/`v` lines for a PB model given as its true variables.
fn solver_text(status: &str, num_vars: u32, model: &[Atom], objective: Option<i64>) -> String {
    let mut out = String::new();
    if let Some(o) = objective {
        out.push_str(&format!("o {o}\n"));
    }
    out.push_str(&format!("s {status}\nv"));
    for v in 1..=num_vars {
        let sign = if model.contains(&a(v)) { "" } else { "-" };
        out.push_str(&format!(" {sign}x{v}"));
        if v % 5 == 0 {
            out.push_str("\nv");
        }
    }
    out.push('\n');
    out
}

fn theory_of(opb: &str) -> PbTheory {
    read_opb(opb).unwrap().0
}

fn objective_value(opb: &str, model: &[Atom]) -> i64 {
    let (_, objective) = read_opb(opb).unwrap();
    objective
        .unwrap()
        .iter()
        .filter(|(_, l)| l.eval(model.contains(&l.atom)))
        .map(|(c, _)| i64::try_from(c).unwrap())
        .sum()
}

fn choice_program() -> Program {
    // {2;3}. 4 <- 2, 3. named b c d
    let mut p = Program::new();
    p.push(Rule::choice(vec![a(2), a(3)], vec![]));
    p.push(Rule::basic(a(4), vec![a(2).pos(), a(3).pos()]));
    p.name(a(2), "b");
    p.name(a(3), "c");
    p.name(a(4), "d");
    p
}

#[test]
fn translation_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "ph.sm", &write_program(&pigeonhole(3, 2)));
    let mut outputs = Vec::new();
    for k in 0..2 {
        let opb = path(&dir, &format!("out{k}.opb"));
        let r = run(&["translate", &input, "--out", &opb], "");
        assert_eq!(r.code, 0, "{}", r.stderr);
        outputs.push((
            fs::read(&opb).unwrap(),
            fs::read(format!("{opb}.record")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn stdin_to_stdout() {
    let program = write_program(&choice_program());
    let r = run(&["translate"], &program);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("* #variable= "));
    let r2 = run(&["translate", "-"], &program);
    assert_eq!(r.stdout, r2.stdout);
}

#[test]
fn facts_only_program() {
    let mut p = Program::new();
    p.push(Rule::fact(a(1)));
    p.push(Rule::fact(a(2)));
    let r = run(&["translate"], &write_program(&p));
    assert_eq!(r.code, 0);
    let theory = theory_of(&r.stdout);
    let models = enumerate_pb_models(&theory, &OracleLimits::default()).unwrap();
    assert_eq!(models, vec![[a(1), a(2)].into()]);
    for c in &theory.constraints {
        assert_eq!(c.terms.len(), 1, "{c}");
    }
}

#[test]
fn pigeonhole_two_in_one_unsat() {
    let r = run(&["benchgen", "pigeonhole", "--params", "n=2,m=1"], "");
    assert_eq!(r.code, 0);
    let t = run(&["translate"], &r.stdout);
    assert_eq!(t.code, 0);
    let models = enumerate_pb_models(&theory_of(&t.stdout), &OracleLimits::default()).unwrap();
    assert!(models.is_empty());
}

#[test]
fn two_minimize_statements() {
    let dir = TempDir::new().unwrap();
    let mut p = choice_program();
    p.push_minimize(vec![WeightedLiteral::new(1, a(2).pos())]);
    p.push_minimize(vec![
        WeightedLiteral::new(2, a(3).neg()),
        WeightedLiteral::new(1, a(4).pos()),
    ]);
    let input = write(&dir, "p.sm", &write_program(&p));
    let opb_path = path(&dir, "p.opb");
    let r = run(&["translate", &input, "--out", &opb_path], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let opb = fs::read_to_string(&opb_path).unwrap();
    assert!(opb.lines().nth(1).unwrap().starts_with("min: "));
    let record = fs::read_to_string(format!("{opb_path}.record")).unwrap();
    assert_eq!(
        record.lines().filter(|l| l.starts_with("level ")).count(),
        2
    );

    // The optimum with the last statement most significant is {c}: cost
    // (0, 0) would need c true and b false, d false.
    let theory = theory_of(&opb);
    let models = enumerate_pb_models(&theory, &OracleLimits::default()).unwrap();
    let best = models
        .iter()
        .map(|m| m.iter().copied().collect::<Vec<_>>())
        .min_by_key(|m| objective_value(&opb, m))
        .unwrap();
    let value = objective_value(&opb, &best);
    let text = solver_text("OPTIMUM FOUND", theory.num_vars, &best, Some(value));
    let r = run(
        &[
            "map-answer",
            "--record",
            &format!("{opb_path}.record"),
            "--verify",
            "--program",
            &input,
        ],
        &text,
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        r.stdout,
        "s OPTIMUM FOUND\nAnswer: c\nOptimization: 0 0\nverify: PASS\n"
    );
}

#[test]
fn map_answer_verify() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.sm", &write_program(&choice_program()));
    let opb_path = path(&dir, "p.opb");
    assert_eq!(run(&["translate", &input, "--out", &opb_path], "").code, 0);
    let record = format!("{opb_path}.record");
    let theory = theory_of(&fs::read_to_string(&opb_path).unwrap());

    // every PB model maps to a stable model
    for m in enumerate_pb_models(&theory, &OracleLimits::default()).unwrap() {
        let m: Vec<Atom> = m.into_iter().collect();
        let text = solver_text("SATISFIABLE", theory.num_vars, &m, None);
        let r = run(
            &[
                "map-answer",
                "--record",
                &record,
                "--verify",
                "--program",
                &input,
            ],
            &text,
        );
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert!(r.stdout.ends_with("verify: PASS\n"), "{}", r.stdout);
    }

    // b and c without d is not stable (d must follow)
    let text = solver_text("SATISFIABLE", theory.num_vars, &[a(2), a(3)], None);
    let r = run(
        &[
            "map-answer",
            "--record",
            &record,
            "--verify",
            "--program",
            &input,
        ],
        &text,
    );
    assert_eq!(r.code, 7);
    assert_eq!(r.stdout, "s SATISFIABLE\nAnswer: b c\nverify: FAIL\n");

    // answer from a file instead of stdin
    let text = solver_text("SATISFIABLE", theory.num_vars, &[a(2)], None);
    let answer = write(&dir, "answer.txt", &text);
    let r = run(&["map-answer", "--record", &record, "--input", &answer], "");
    assert_eq!(r.stdout, "s SATISFIABLE\nAnswer: b\n");
}

#[test]
fn unsatisfiable_passthrough() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.sm", &write_program(&choice_program()));
    let opb_path = path(&dir, "p.opb");
    assert_eq!(run(&["translate", &input, "--out", &opb_path], "").code, 0);
    let r = run(
        &["map-answer", "--record", &format!("{opb_path}.record")],
        "c no model\ns UNSATISFIABLE\n",
    );
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "s UNSATISFIABLE\n");
}

#[test]
fn unnamed_atoms_flag() {
    let dir = TempDir::new().unwrap();
    let mut p = Program::new();
    p.push(Rule::fact(a(1)));
    p.push(Rule::fact(a(2)));
    p.name(a(2), "named");
    let input = write(&dir, "p.sm", &write_program(&p));
    let opb_path = path(&dir, "p.opb");
    assert_eq!(run(&["translate", &input, "--out", &opb_path], "").code, 0);
    let text = solver_text("SATISFIABLE", 2, &[a(1), a(2)], None);
    let record = format!("{opb_path}.record");
    let r = run(&["map-answer", "--record", &record], &text);
    assert_eq!(r.stdout, "s SATISFIABLE\nAnswer: named\n");
    let r = run(&["map-answer", "--record", &record, "--unnamed"], &text);
    assert_eq!(r.stdout, "s SATISFIABLE\nAnswer: named #1\n");
}

#[test]
fn negated_literal_style() {
    let mut p = Program::new();
    p.push(Rule::choice(vec![a(2)], vec![]));
    p.push(Rule::basic(a(1), vec![a(2).neg()]));
    let plain = run(&["translate"], &write_program(&p));
    let negated = run(&["translate", "--opb-negated-literals"], &write_program(&p));
    assert!(plain.stdout.contains("-1 x"));
    assert!(!negated.stdout.contains('-'));
    assert!(negated.stdout.contains("~x"));
    let count = |s: &str| enumerate_pb_models(&theory_of(s), &OracleLimits::default()).unwrap();
    assert_eq!(count(&plain.stdout), count(&negated.stdout));
}

#[cfg(unix)]
#[test]
fn solve_with_external_command() {
    use std::os::unix::fs::PermissionsExt;
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.sm", &write_program(&choice_program()));
    // A fake solver that ignores the OPB file and reports b true.
    let script = write(
        &dir,
        "solver.sh",
        "#!/bin/sh\ntest -f \"$1\" || exit 1\necho 's SATISFIABLE'\necho 'v -x1 x2 -x3 -x4'\n",
    );
    fs::set_permissions(&script, fs::Permissions::from_mode(0o755)).unwrap();
    let r = run(&["translate", &input, "--solve", &script], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "s SATISFIABLE\nAnswer: b\n");
}

#[test]
fn benchgen_series() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "series");
    let r = run(
        &[
            "benchgen",
            "dominating-set",
            "--params",
            "length=1",
            "--steps",
            "3",
            "--stride",
            "2",
            "--out",
            &out,
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "dominating-set-length1.smodels",
            "dominating-set-length3.smodels",
            "dominating-set-length5.smodels"
        ]
    );
    assert!(Path::new(&out)
        .join("dominating-set-length5.smodels")
        .is_file());
}

#[test]
fn oracle_subcommand() {
    let r = run(&["oracle", "--check"], &write_program(&choice_program()));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("Models: 4\n"));
    assert!(r.stdout.contains("check: PASS"));
}

mod exit_codes {
    use super::*;

    #[test]
    fn missing_input_file_is_io() {
        assert_eq!(run(&["translate", "/nonexistent/input.sm"], "").code, 1);
    }

    #[test]
    fn usage() {
        assert_eq!(run(&["translate", "--min-order", "middle"], "").code, 2);
        assert_eq!(run(&["frobnicate"], "").code, 2);
        assert_eq!(
            run(&["benchgen", "pigeonhole", "--params", "holes=3"], "").code,
            2
        );
        assert_eq!(
            run(
                &["benchgen", "vertex-cover", "--params", "rows=3,cols=2"],
                ""
            )
            .code,
            2
        );
    }

    #[test]
    fn parse_error() {
        let r = run(&["translate"], "9 1 0 0\n0\n0\nB+\n0\nB-\n0\n1\n");
        assert_eq!(r.code, 3);
        assert!(r.stderr.contains("unknown rule type"), "{}", r.stderr);
    }

    #[test]
    fn not_head_cycle_free() {
        // 1 | 2.  1 <- 2.  2 <- 1.
        let mut p = Program::new();
        p.push(Rule::disjunctive(vec![a(1), a(2)], vec![]));
        p.push(Rule::basic(a(1), vec![a(2).pos()]));
        p.push(Rule::basic(a(2), vec![a(1).pos()]));
        let r = run(&["translate"], &write_program(&p));
        assert_eq!(r.code, 4, "{}", r.stderr);
    }

    #[test]
    fn recursive_aggregate() {
        let mut p = Program::new();
        p.push(Rule::Weight(WeightRule::cardinality(
            a(1),
            1,
            vec![a(2).pos()],
        )));
        p.push(Rule::basic(a(2), vec![a(1).pos()]));
        let r = run(&["translate"], &write_program(&p));
        assert_eq!(r.code, 5, "{}", r.stderr);
    }

    #[test]
    fn bad_record_and_answer() {
        let dir = TempDir::new().unwrap();
        let bogus = write(&dir, "bogus.record", "not a record\n");
        assert_eq!(
            run(&["map-answer", "--record", &bogus], "s UNSATISFIABLE\n").code,
            6
        );
        assert_eq!(
            run(&["map-answer", "--record", &path(&dir, "missing")], "").code,
            1
        );

        let input = write(&dir, "p.sm", &write_program(&choice_program()));
        let opb_path = path(&dir, "p.opb");
        assert_eq!(run(&["translate", &input, "--out", &opb_path], "").code, 0);
        let record = format!("{opb_path}.record");
        // contradictory assignment
        let r = run(
            &["map-answer", "--record", &record],
            "s SATISFIABLE\nv x2 -x2\n",
        );
        assert_eq!(r.code, 6);
        // no status line
        assert_eq!(run(&["map-answer", "--record", &record], "v x1\n").code, 6);
        // incomplete assignment
        assert_eq!(
            run(
                &["map-answer", "--record", &record],
                "s SATISFIABLE\nv x1\n"
            )
            .code,
            6
        );
    }

    #[test]
    fn verify_failure() {
        let mut p = Program::new();
        p.push(Rule::basic(a(1), vec![a(1).pos()]));
        let dir = TempDir::new().unwrap();
        let input = write(&dir, "p.sm", &write_program(&p));
        let opb_path = path(&dir, "p.opb");
        assert_eq!(run(&["translate", &input, "--out", &opb_path], "").code, 0);
        let r = run(
            &[
                "map-answer",
                "--record",
                &format!("{opb_path}.record"),
                "--verify",
                "--program",
                &input,
            ],
            "s SATISFIABLE\nv x1\n",
        );
        assert_eq!(r.code, 7);
    }

    #[test]
    fn oracle_limit() {
        let r = run(
            &["oracle", "--max-oracle-atoms", "3"],
            &write_program(&pigeonhole(2, 2)),
        );
        assert_eq!(r.code, 8);
    }
}

#[test]
fn theory_parses_back() {
    let r = run(&["translate"], &write_program(&pigeonhole(2, 2)));
    let theory = theory_of(&r.stdout);
    assert!(theory.constraints.iter().all(PbConstraint::is_normalized));
    assert_eq!(
        enumerate_pb_models(&theory, &OracleLimits::default())
            .unwrap()
            .len(),
        2
    );
}

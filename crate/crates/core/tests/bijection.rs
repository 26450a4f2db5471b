mod common;

use asp2pb_core::oracle::{check_bijection, OracleLimits};
use asp2pb_core::{translate, TranslateOptions};
use common::{random_program, rng, Shape};

#[test]
fn random_programs_translate_bijectively() {
    let mut r = rng(7);
    let shape = Shape::default();
    for round in 0..300 {
        let p = random_program(&mut r, &shape);
        let t = translate(&p, &TranslateOptions::default()).unwrap();
        assert!(t.theory.constraints.iter().all(|c| c.is_normalized()));
        let report = check_bijection(&p, &t.theory, &t.record, &OracleLimits::default()).unwrap();
        assert!(
            report.is_bijection(),
            "round {round}: {report:?}\n{}",
            asp2pb_core::smodels::write_program(&p)
        );
    }
}

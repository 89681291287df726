use std::path::Path;
use std::time::Instant;

use pcmq_core::combinatorics::verify_all;
use serde::Serialize;

use crate::config::VerifyParams;
use crate::io::write_csv;
use crate::outcome::{Outcome, RunError};

#[derive(Serialize)]
struct SuiteRow {
    suite: String,
    cases: usize,
    failures: usize,
    passed: bool,
    first_failure: String,
}

pub fn run(p: &VerifyParams, dir: &Path) -> Result<Outcome, RunError> {
    let start = Instant::now();
    let reports = verify_all(p.max)?;
    let seconds = start.elapsed().as_secs_f64();
    let rows: Vec<SuiteRow> = reports
        .iter()
        .map(|r| SuiteRow {
            suite: r.name.clone(),
            cases: r.cases,
            failures: r.failures.len(),
            passed: r.passed(),
            first_failure: r
                .failures
                .first()
                .map(|f| format!("{f:?}"))
                .unwrap_or_default(),
        })
        .collect();
    for r in &rows {
        println!(
            "{:<12} {:>6} cases  {}",
            r.suite,
            r.cases,
            if r.passed { "pass" } else { "FAIL" }
        );
    }
    let csv = write_csv(&dir.join("verify.csv"), &rows)?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(Outcome {
        subcommand: "verify".into(),
        passed,
        artifacts: vec![csv],
        summary: serde_json::json!({ "max": p.max, "seconds": seconds, "suites": rows }),
    })
}

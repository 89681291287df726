use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use super::SUMMARY_FILE;
use crate::config::ReportParams;
use crate::io::{write_json, write_plot_script};
use crate::outcome::{Outcome, RunError};

/// Tables the plot script knows how to draw, by subcommand directory.
const PLOTTABLE: &[(&str, &str, &str)] = &[
    ("bessel", "bessel.csv", "bessel"),
    ("limit", "limit.csv", "limit"),
    ("bounds", "sandwich.csv", "sandwich"),
    ("bounds", "slope_points.csv", "slope_points"),
    ("simulate", "simulate.csv", "simulate"),
];

#[derive(Debug, Serialize)]
struct RunEntry {
    subcommand: String,
    passed: bool,
    path: PathBuf,
    summary: serde_json::Value,
}

pub fn run(p: &ReportParams, out_dir: &Path, dir: &Path) -> Result<Outcome, RunError> {
    let input = p.input.clone().unwrap_or_else(|| out_dir.to_path_buf());
    if !input.is_dir() {
        return Err(RunError::Config(format!(
            "report input {} is not a directory",
            input.display()
        )));
    }
    let mut subdirs: Vec<PathBuf> = fs::read_dir(&input)
        .with_context(|| format!("listing {}", input.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && p.file_name().is_some_and(|n| n != "report"))
        .collect();
    subdirs.sort();

    let mut runs = Vec::new();
    for sub in &subdirs {
        let path = sub.join(SUMMARY_FILE);
        let Ok(text) = fs::read_to_string(&path) else {
            continue;
        };
        let v: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        runs.push(RunEntry {
            subcommand: v["subcommand"].as_str().unwrap_or_default().to_string(),
            passed: v["passed"].as_bool().unwrap_or(false),
            path,
            summary: v["summary"].clone(),
        });
    }
    if runs.is_empty() {
        return Err(RunError::Config(format!(
            "no run summaries found under {}",
            input.display()
        )));
    }

    let mut tables = Vec::new();
    for &(sub, file, kind) in PLOTTABLE {
        let path = input.join(sub).join(file);
        if path.is_file() {
            let abs = fs::canonicalize(&path).unwrap_or(path);
            tables.push((kind, abs));
        }
    }
    let script = write_plot_script(dir, &tables)?;
    let report = write_json(&dir.join("report.json"), &runs)?;

    for r in &runs {
        println!(
            "{:<10} {}",
            r.subcommand,
            if r.passed { "pass" } else { "FAIL" }
        );
    }
    println!("plot script: {}", script.display());
    let passed = runs.iter().all(|r| r.passed);
    Ok(Outcome {
        subcommand: "report".into(),
        passed,
        artifacts: vec![report, script],
        summary: serde_json::json!({
            "input": input,
            "runs": runs.iter().map(|r| serde_json::json!({"subcommand": r.subcommand, "passed": r.passed})).collect::<Vec<_>>(),
            "plotted": tables.iter().map(|(k, _)| *k).collect::<Vec<_>>(),
        }),
    })
}

//! File formats: CSV tables, JSON summaries, frame files and plot scripts.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use pcmq_core::frames::UnitNormFrame;
use serde::Serialize;

/// Writes `rows` as CSV with a header taken from the field names.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<PathBuf> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<PathBuf> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(path.to_path_buf())
}

/// One unit vector per row, columns `x1, …, xd`.
pub fn write_frame_csv(path: &Path, frame: &UnitNormFrame) -> anyhow::Result<PathBuf> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record((1..=frame.dim()).map(|i| format!("x{i}")))?;
    for v in frame.iter() {
        // shortest round-trip formatting keeps the file bit-exact
        w.write_record(v.iter().map(|c| format!("{c:?}")))?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

pub fn read_frame_csv(path: &Path) -> anyhow::Result<UnitNormFrame> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let dim = r.headers()?.len();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != dim {
            bail!(
                "row with {} columns in a {dim}-column frame file",
                rec.len()
            );
        }
        for field in rec.iter() {
            rows.push(
                field
                    .trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad number {field:?}"))?,
            );
        }
    }
    Ok(UnitNormFrame::from_rows(dim, rows)?)
}

/// A matplotlib script that plots whichever of the standard tables exist in
/// `dir`, written as `dir/plot.py`.
pub fn write_plot_script(dir: &Path, tables: &[(&str, PathBuf)]) -> anyhow::Result<PathBuf> {
    let mut script = String::from(
        "# regenerate with `pcmq report`; run with `python3 plot.py`\n\
         import csv, math, os, sys\n\
         import matplotlib\n\
         matplotlib.use(\"Agg\")\n\
         import matplotlib.pyplot as plt\n\n\
         HERE = os.path.dirname(os.path.abspath(__file__))\n\n\
         def rows(path):\n\
         \x20   with open(path, newline=\"\") as fh:\n\
         \x20       return list(csv.DictReader(fh))\n\n",
    );
    for (kind, path) in tables {
        let p = path.display();
        match *kind {
            "slope_points" => script.push_str(&format!(
                "data = rows(r\"{p}\")\n\
                 fig, ax = plt.subplots()\n\
                 for d in sorted({{r[\"d\"] for r in data}}, key=int):\n\
                 \x20   pts = [r for r in data if r[\"d\"] == d]\n\
                 \x20   ax.loglog([float(r[\"delta\"]) for r in pts], [float(r[\"value\"]) for r in pts], \"o-\", label=f\"d={{d}}\")\n\
                 ax.set_xlabel(\"delta\"); ax.set_ylabel(\"limiting error\"); ax.legend()\n\
                 fig.savefig(os.path.join(HERE, \"slopes.png\"), dpi=150)\n\n"
            )),
            "sandwich" => script.push_str(&format!(
                "data = [r for r in rows(r\"{p}\") if r[\"status\"] == \"checked\"]\n\
                 fig, ax = plt.subplots()\n\
                 x = range(len(data))\n\
                 ax.semilogy(x, [float(r[\"lower\"]) for r in data], \"v\", label=\"lower\")\n\
                 ax.semilogy(x, [float(r[\"integral\"]) for r in data], \"o\", label=\"|integral|\")\n\
                 ax.semilogy(x, [float(r[\"upper\"]) for r in data], \"^\", label=\"upper\")\n\
                 ax.set_xlabel(\"grid point\"); ax.legend()\n\
                 fig.savefig(os.path.join(HERE, \"sandwich.png\"), dpi=150)\n\n"
            )),
            "limit" => script.push_str(&format!(
                "data = rows(r\"{p}\")\n\
                 fig, ax = plt.subplots()\n\
                 for m in sorted({{r[\"method\"] for r in data}}):\n\
                 \x20   pts = [r for r in data if r[\"method\"] == m]\n\
                 \x20   ax.loglog([float(r[\"r\"]) / float(r[\"delta\"]) for r in pts], [max(float(r[\"value\"]), 1e-300) for r in pts], \"o\", label=m)\n\
                 ax.set_xlabel(\"r/delta\"); ax.set_ylabel(\"limiting error\"); ax.legend()\n\
                 fig.savefig(os.path.join(HERE, \"limit.png\"), dpi=150)\n\n"
            )),
            "bessel" => script.push_str(&format!(
                "data = rows(r\"{p}\")\n\
                 fig, ax = plt.subplots()\n\
                 ax.semilogy([float(r[\"x\"]) for r in data], [abs(float(r[\"value\"]) - float(r[\"main_term\"])) + 1e-300 for r in data], \"o\", label=\"|J - main|\")\n\
                 ax.semilogy([float(r[\"x\"]) for r in data], [float(r[\"residual_bound\"]) + 1e-300 for r in data], \"_\", label=\"envelope\")\n\
                 ax.set_xlabel(\"x\"); ax.legend()\n\
                 fig.savefig(os.path.join(HERE, \"bessel.png\"), dpi=150)\n\n"
            )),
            "simulate" => script.push_str(&format!(
                "data = rows(r\"{p}\")\n\
                 fig, ax = plt.subplots()\n\
                 x = [float(r[\"r\"]) / float(r[\"delta\"]) for r in data]\n\
                 ax.semilogy(x, [float(r[\"e_delta\"]) for r in data], \"o\", label=\"E_delta\")\n\
                 ax.semilogy(x, [float(r[\"limit\"]) for r in data], \"x\", label=\"limit\")\n\
                 ax.semilogy(x, [float(r[\"wnh_rmse\"]) for r in data], \"s\", label=\"WNH rms\")\n\
                 ax.set_xlabel(\"r/delta\"); ax.legend()\n\
                 fig.savefig(os.path.join(HERE, \"simulate.png\"), dpi=150)\n\n"
            )),
            _ => {}
        }
    }
    let path = dir.join("plot.py");
    fs::write(&path, script).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

use std::fs;
use std::path::Path;

use phmoea_core::moea::{report, RunResult};
use phmoea_core::Point64;

use crate::manifest::RunManifest;
use crate::CliError;

fn csv_err(e: csv::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the four per-run files into `dir`.
pub fn write_run(dir: &Path, manifest: &RunManifest, result: &RunResult) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(manifest)? + "\n",
    )?;
    let file = |name: &str| fs::File::create(dir.join(name)).map(std::io::BufWriter::new);
    let core = |e: phmoea_core::Error| CliError::Runtime(e.to_string());
    report::write_pareto_front(&result.pareto, file("pareto_front.csv")?).map_err(core)?;
    report::write_history(&result.history, file("history.csv")?).map_err(core)?;
    report::write_pareto_configs(&result.pareto, file("pareto_configs.json")?).map_err(core)?;
    Ok(())
}

/// Final indicators of one seed.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedSummary {
    pub seed: u64,
    pub fes: usize,
    pub front_size: usize,
    pub igd: Option<f64>,
    pub hv: f64,
}

/// Mean and sample standard deviation; the deviation of one value is 0.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Per-seed rows followed by `mean` and `std` rows.
pub fn write_summary(path: &Path, rows: &[SeedSummary]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["seed", "fes", "front_size", "igd", "hv"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.seed.to_string(),
            r.fes.to_string(),
            r.front_size.to_string(),
            opt(r.igd),
            r.hv.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let col = |f: &dyn Fn(&SeedSummary) -> Option<f64>| -> Option<(f64, f64)> {
        let v: Option<Vec<f64>> = rows.iter().map(f).collect();
        v.filter(|v| !v.is_empty()).map(|v| mean_std(&v))
    };
    let stats = [
        col(&|r| Some(r.fes as f64)),
        col(&|r| Some(r.front_size as f64)),
        col(&|r| r.igd),
        col(&|r| Some(r.hv)),
    ];
    for (label, pick) in [("mean", 0usize), ("std", 1)] {
        let mut rec = vec![label.to_string()];
        for s in &stats {
            rec.push(
                s.map(|p| if pick == 0 { p.0 } else { p.1 }.to_string())
                    .unwrap_or_default(),
            );
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the `f1`/`f2` columns of a CSV with a header row.
pub fn read_points(path: &Path) -> Result<Vec<Point64>, CliError> {
    let input = |msg: String| CliError::Input(format!("{}: {msg}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(|e| input(e.to_string()))?;
    let headers = r.headers().map_err(|e| input(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| input(format!("missing column {name:?}")))
    };
    let (c1, c2) = (col("f1")?, col("f2")?);
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| input(e.to_string()))?;
        let num = |c: usize| -> Result<f64, CliError> {
            let s = rec.get(c).unwrap_or("").trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| input(format!("row {}: {s:?} is not a finite number", line + 1)))
        };
        out.push([num(c1)?, num(c2)?]);
    }
    Ok(out)
}

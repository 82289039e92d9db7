//! CSV and JSON renderings of a [`Report`].

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::experiment::{metric_values, Report, METRIC_COLUMNS};
use crate::HarnessError;

const SETTING_COLUMNS: [&str; 10] =
    ["benchmark", "algorithm", "findscope", "qgen", "var", "val", "cut_min", "cut_max", "restart_cutoff", "fingerprint"];

/// One row per run, then `mean` and `stddev` rows.
pub fn write_csv<W: Write>(report: &Report, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["run", "seed", "status"];
    header.extend(METRIC_COLUMNS);
    header.extend(SETTING_COLUMNS);
    w.write_record(&header)?;

    let s = &report.settings;
    let settings = [
        s.benchmark.clone(),
        s.algorithm.clone(),
        s.findscope.to_string(),
        s.qgen.clone(),
        s.var.clone(),
        s.val.clone(),
        s.cut_min.to_string(),
        s.cut_max.to_string(),
        s.restart_cutoff.to_string(),
        s.fingerprint.clone(),
    ];
    for r in &report.runs {
        let mut row = vec![r.run.to_string(), r.seed.to_string(), format!("{:?}", r.status)];
        row.extend(metric_values(&r.metrics).iter().map(f64::to_string));
        row.extend(settings.iter().cloned());
        w.write_record(&row)?;
    }
    for (label, pick) in [("mean", 0), ("stddev", 1)] {
        let mut row = vec![label.to_string(), String::new(), String::new()];
        row.extend(report.summary.metrics.iter().map(|m| if pick == 0 { m.mean } else { m.stddev }.to_string()));
        row.extend(settings.iter().cloned());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Learning curves in long form: run, queries, learned, elapsed.
pub fn write_curves_csv<W: Write>(report: &Report, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run", "seed", "queries", "learned", "elapsed_secs"])?;
    for r in &report.runs {
        for p in r.curve.iter().flatten() {
            w.write_record([
                r.run.to_string(),
                r.seed.to_string(),
                p.queries.to_string(),
                p.learned.to_string(),
                p.elapsed_secs.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn to_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Paths written next to a `--out` target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub curves: PathBuf,
}

impl OutputPaths {
    pub fn from_out(out: &Path) -> Self {
        let stem = match out.extension().and_then(|e| e.to_str()) {
            Some("csv") | Some("json") => out.with_extension(""),
            _ => out.to_path_buf(),
        };
        let with = |suffix: &str| {
            let mut s = stem.clone().into_os_string();
            s.push(suffix);
            PathBuf::from(s)
        };
        OutputPaths { csv: with(".csv"), json: with(".json"), curves: with(".curves.csv") }
    }
}

/// Writes the CSV and JSON files, plus curves when the report has them.
pub fn write_all(report: &Report, out: &Path) -> Result<OutputPaths, HarnessError> {
    let paths = OutputPaths::from_out(out);
    if let Some(dir) = paths.csv.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_csv(report, std::fs::File::create(&paths.csv)?)?;
    std::fs::write(&paths.json, to_json(report))?;
    if report.runs.iter().any(|r| r.curve.is_some()) {
        write_curves_csv(report, std::fs::File::create(&paths.curves)?)?;
    }
    Ok(paths)
}

//! Report files: one JSON per check and a summary CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::checks::CheckResult;
use crate::CliError;

pub const SUMMARY_HEADER: &str = "check,instance,verdict,lhs,rhs,slack,runtime_ms";

/// Base file name of the `index`-th report, without extension.
pub fn report_stem(index: usize, check: &str) -> String {
    format!("{index:03}_{check}")
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn summary_csv(results: &[CheckResult], runtimes_ms: &[f64]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for (r, ms) in results.iter().zip(runtimes_ms) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{ms:.3}",
            csv_field(&r.check),
            csv_field(&r.instance),
            r.verdict.as_str(),
            opt(r.lhs),
            opt(r.rhs),
            opt(r.slack),
        );
    }
    out
}

/// The JSON body of a report. Holds no timings, so it is reproducible.
pub fn report_json(result: &CheckResult) -> String {
    let mut s = serde_json::to_string_pretty(result).expect("reports serialize");
    s.push('\n');
    s
}

fn write(path: PathBuf, contents: &str) -> Result<(), CliError> {
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

pub fn emit_report(dir: &Path, results: &[CheckResult], runtimes_ms: &[f64]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (i, r) in results.iter().enumerate() {
        let stem = report_stem(i, &r.check);
        write(dir.join(format!("{stem}.json")), &report_json(r))?;
        for (ext, body) in &r.attachments {
            write(dir.join(format!("{stem}.{ext}")), body)?;
        }
    }
    write(dir.join("summary.csv"), &summary_csv(results, runtimes_ms))
}

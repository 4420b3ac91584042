//! Subcommand bodies, separated from argument parsing for testing.

use crate::config::Experiment;
use crate::error::{CliError, CliResult};
use crate::experiment::{audit, run_sweep, write_aggregates, write_records, write_steps, Mode, Sweep};
use dimincr_core::testfuncs::best_s_term_oracle;
use dimincr_core::theory::{
    detection_iterations_bound, false_positive_bound, q_value, union_failure_bound, QInput,
};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Raw and summary CSV text of a finished sweep.
pub struct SweepReport {
    pub sweep: Sweep,
    pub raw_csv: String,
    pub summary_csv: String,
}

fn summary_path(raw: &Path) -> PathBuf {
    let stem = raw.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    raw.with_file_name(format!("{stem}.summary.csv"))
}

/// Runs the sweep, audits the aggregates and writes the configured outputs.
pub fn sweep(exp: &Experiment, mode: Mode) -> CliResult<SweepReport> {
    let sweep = run_sweep(exp, mode);
    let mut raw = Vec::new();
    write_records(&mut raw, &sweep.records, exp.config.timings)?;
    let raw_csv = String::from_utf8(raw).expect("utf-8 CSV");
    audit(&raw_csv, &sweep.aggregates)?;
    let mut summary = Vec::new();
    write_aggregates(&mut summary, &sweep.aggregates)?;
    let summary_csv = String::from_utf8(summary).expect("utf-8 CSV");
    if let Some(out) = &exp.config.output {
        let out = Path::new(out);
        std::fs::write(out, &raw_csv)?;
        std::fs::write(summary_path(out), &summary_csv)?;
    }
    if let Some(steps) = &exp.config.steps_output {
        write_steps(std::fs::File::create(steps)?, &sweep.records)?;
    }
    Ok(SweepReport { sweep, raw_csv, summary_csv })
}

/// Prints a finished sweep and returns the first recorded failure, if any.
pub fn report_sweep(exp: &Experiment, rep: &SweepReport, mode: Mode, out: &mut impl Write) -> CliResult<()> {
    if exp.config.output.is_none() {
        out.write_all(rep.raw_csv.as_bytes())?;
        writeln!(out)?;
        out.write_all(rep.summary_csv.as_bytes())?;
    }
    for r in &rep.sweep.records {
        if let Err(e) = &r.outcome {
            eprintln!("run {} (s = {}) failed: {e}", r.run, r.s);
        }
    }
    if mode == Mode::RecoverSparse {
        for (s, ok, n) in rep.sweep.success_rates() {
            writeln!(out, "s = {s}: success rate {} ({ok}/{n})", ok as f64 / n as f64)?;
        }
    }
    match rep.sweep.first_error() {
        Some(e) => Err(e.clone()),
        None => Ok(()),
    }
}

/// Best `s`-term oracle for repetition `run` as pretty JSON.
pub fn oracle(exp: &Experiment, s: usize, run: usize) -> CliResult<String> {
    let f = exp.function(run)?;
    let res = best_s_term_oracle(&*f, &exp.space, s, exp.config.enumeration_limit)
        .map_err(|e| CliError::from_run(&e))?;
    let v = json!({
        "s": s,
        "run": run,
        "residual": res.residual,
        "indices": res.index_set.to_vecs(),
    });
    Ok(serde_json::to_string_pretty(&v).expect("serializable") + "\n")
}

pub fn theory_iterations(b: f64, c: f64, i3d: usize, delta: f64, tail: f64, d: usize, epsilon: f64) -> CliResult<String> {
    let r = detection_iterations_bound(b, c, i3d, delta, tail, d, epsilon).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(format!("r = {r}\n"))
}

pub fn theory_q(inp: &QInput<'_>, union: Option<(usize, u32)>) -> CliResult<String> {
    let q = q_value(inp).map_err(|e| CliError::Config(e.to_string()))?;
    let mut s = format!("q = {q}\n");
    if let Some((n, r)) = union {
        s += &format!("failure bound = {}\n", union_failure_bound(n, q, r));
    }
    Ok(s)
}

pub fn theory_false_positive(delta_psi: f64, delta_plus: f64, r: u32) -> CliResult<String> {
    let p = false_positive_bound(delta_psi, delta_plus, r).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(format!("false positive bound = {p}\n"))
}

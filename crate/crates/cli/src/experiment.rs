//! Seeded sweeps, per-run records, aggregates and CSV output.

use crate::config::Experiment;
use crate::error::{CliError, CliResult};
use crate::stats::{summarize, Summary};
use dimincr_core::detect::StepStats;
use dimincr_core::metrics::error_report;
use dimincr_core::{run, Counted, BlackBox};
use std::io::Write;
use std::time::Instant;

pub const CSV_HEADER: [&str; 11] = [
    "run", "s", "method", "strategy", "samples", "seconds", "rel_l2", "linf", "l2", "l1", "success",
];
pub const SUMMARY_HEADER: [&str; 7] = ["s", "metric", "count", "median", "lower_quartile", "upper_quartile", "outliers"];
pub const STEPS_HEADER: [&str; 11] = [
    "run", "s", "step", "kind", "dims", "stage", "candidates", "nodes", "iterations", "samples", "detected",
];
const METRICS: [&str; 5] = ["samples", "rel_l2", "linf", "l2", "l1"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Success means the run completed.
    Approximate,
    /// Success means exact support and `ℓ∞` error within tolerance.
    RecoverSparse,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub samples: u64,
    /// Black-box counter delta over the run.
    pub counted: u64,
    pub seconds: f64,
    pub rel_l2: f64,
    pub linf: f64,
    pub l2: f64,
    pub l1: f64,
    pub support_exact: Option<bool>,
    pub detected: usize,
    pub steps: Vec<StepStats>,
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub run: usize,
    pub s: usize,
    pub method: String,
    pub strategy: String,
    pub outcome: Result<Outcome, CliError>,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub s: usize,
    pub metric: String,
    pub summary: Summary,
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<Aggregate>,
}

impl Sweep {
    pub fn first_error(&self) -> Option<&CliError> {
        self.records.iter().find_map(|r| r.outcome.as_ref().err())
    }

    /// Fraction of successful repetitions for each `s`, in sweep order.
    pub fn success_rates(&self) -> Vec<(usize, usize, usize)> {
        let mut out: Vec<(usize, usize, usize)> = Vec::new();
        for r in &self.records {
            match out.iter_mut().find(|(s, ..)| *s == r.s) {
                Some(e) => {
                    e.1 += usize::from(r.success);
                    e.2 += 1;
                }
                None => out.push((r.s, usize::from(r.success), 1)),
            }
        }
        out
    }
}

fn one_run(exp: &Experiment, s: usize, rep: usize, mode: Mode) -> CliResult<Outcome> {
    let f = exp.function(rep)?;
    let bb = Counted::new(f.clone());
    let params = exp.params(s, rep);
    let before = bb.evaluations();
    let t0 = Instant::now();
    let res = run(&bb, &exp.basis, &exp.space, &params).map_err(|e| CliError::from_run(&e))?;
    let seconds = t0.elapsed().as_secs_f64();
    let counted = bb.evaluations() - before;
    let rep_err = error_report(&*f, &res.index_set, &res.coefficients, res.total_samples, seconds)
        .map_err(|e| CliError::from_run(&e))?;
    let support_exact = match (mode, f.coefficient_list()) {
        (Mode::RecoverSparse, Some(list)) => {
            let truth: Vec<Vec<i64>> = list.into_iter().filter(|(_, c)| c.norm() > 0.0).map(|(k, _)| k).collect();
            Some(res.index_set.to_vecs() == truth)
        }
        _ => None,
    };
    Ok(Outcome {
        samples: res.total_samples,
        counted,
        seconds,
        rel_l2: rep_err.rel_l2,
        linf: rep_err.coeff_err_linf,
        l2: rep_err.coeff_err_l2,
        l1: rep_err.coeff_err_l1,
        support_exact,
        detected: res.index_set.len(),
        steps: res.steps,
    })
}

/// Runs every `(s, repetition)` pair in order. Failures are recorded per row.
pub fn run_sweep(exp: &Experiment, mode: Mode) -> Sweep {
    let mut records = Vec::new();
    for &s in &exp.s_values {
        for rep in 0..exp.config.runs {
            let outcome = one_run(exp, s, rep, mode);
            let success = match (&outcome, mode) {
                (Ok(_), Mode::Approximate) => true,
                (Ok(o), Mode::RecoverSparse) => o.support_exact == Some(true) && o.linf <= exp.config.success_linf,
                (Err(_), _) => false,
            };
            records.push(RunRecord {
                run: rep,
                s,
                method: exp.method.name().to_string(),
                strategy: exp.strategy.name().to_string(),
                outcome,
                success,
            });
        }
    }
    let aggregates = aggregate(&records, exp.config.timings);
    Sweep { records, aggregates }
}

fn metric(o: &Outcome, name: &str) -> f64 {
    match name {
        "samples" => o.samples as f64,
        "seconds" => o.seconds,
        "rel_l2" => o.rel_l2,
        "linf" => o.linf,
        "l2" => o.l2,
        "l1" => o.l1,
        _ => unreachable!("unknown metric"),
    }
}

fn aggregate(records: &[RunRecord], timings: bool) -> Vec<Aggregate> {
    let mut metrics: Vec<&str> = METRICS.to_vec();
    if timings {
        metrics.insert(1, "seconds");
    }
    let mut s_order: Vec<usize> = Vec::new();
    for r in records {
        if !s_order.contains(&r.s) {
            s_order.push(r.s);
        }
    }
    let mut out = Vec::new();
    for s in s_order {
        for &m in &metrics {
            // Values pass through their CSV text so aggregates can be recomputed from the file.
            let vals: Vec<f64> = records
                .iter()
                .filter(|r| r.s == s)
                .filter_map(|r| r.outcome.as_ref().ok())
                .map(|o| fmt_f64(metric(o, m)).parse::<f64>().expect("round trip"))
                .collect();
            if let Some(summary) = summarize(&vals) {
                out.push(Aggregate { s, metric: m.to_string(), summary });
            }
        }
    }
    out
}

/// Shortest text that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_records<W: Write>(w: W, records: &[RunRecord], timings: bool) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in records {
        let mut row = vec![r.run.to_string(), r.s.to_string(), r.method.clone(), r.strategy.clone()];
        match &r.outcome {
            Ok(o) => {
                row.push(o.samples.to_string());
                row.push(if timings { fmt_f64(o.seconds) } else { String::new() });
                row.extend([o.rel_l2, o.linf, o.l2, o.l1].map(fmt_f64));
            }
            Err(_) => row.extend(std::iter::repeat_n(String::new(), 6)),
        }
        row.push(r.success.to_string());
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_aggregates<W: Write>(w: W, aggregates: &[Aggregate]) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SUMMARY_HEADER)?;
    for a in aggregates {
        let s = &a.summary;
        out.write_record([
            a.s.to_string(),
            a.metric.clone(),
            s.count.to_string(),
            fmt_f64(s.median),
            fmt_f64(s.lower_quartile),
            fmt_f64(s.upper_quartile),
            s.outliers.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_steps<W: Write>(w: W, records: &[RunRecord]) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(STEPS_HEADER)?;
    for r in records {
        let Ok(o) = &r.outcome else { continue };
        for (i, st) in o.steps.iter().enumerate() {
            out.write_record([
                r.run.to_string(),
                r.s.to_string(),
                i.to_string(),
                format!("{:?}", st.kind).to_lowercase(),
                st.dims.to_string(),
                st.stage.to_string(),
                st.candidates.to_string(),
                st.nodes.to_string(),
                st.iterations.to_string(),
                st.samples.to_string(),
                st.detected.len().to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Recomputes the aggregates from raw CSV text and compares them with `expected`.
pub fn audit(raw_csv: &str, expected: &[Aggregate]) -> CliResult<()> {
    let mut rdr = csv::Reader::from_reader(raw_csv.as_bytes());
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(CliError::Other("audit: unexpected CSV header".into()));
    }
    let col = |name: &str| CSV_HEADER.iter().position(|h| *h == name).expect("known column");
    let rows: Vec<csv::StringRecord> = rdr.records().collect::<Result<_, _>>()?;
    let timings = expected.iter().any(|a| a.metric == "seconds");
    let mut metrics: Vec<&str> = METRICS.to_vec();
    if timings {
        metrics.insert(1, "seconds");
    }
    let mut s_order: Vec<usize> = Vec::new();
    for row in &rows {
        let s: usize = row[col("s")].parse().map_err(|_| CliError::Other("audit: bad s".into()))?;
        if !s_order.contains(&s) {
            s_order.push(s);
        }
    }
    let mut recomputed = Vec::new();
    for s in s_order {
        for &m in &metrics {
            let vals: Vec<f64> = rows
                .iter()
                .filter(|r| r[col("s")] == s.to_string() && !r[col(m)].is_empty())
                .map(|r| r[col(m)].parse::<f64>().expect("numeric field"))
                .collect();
            if let Some(summary) = summarize(&vals) {
                recomputed.push(Aggregate { s, metric: m.to_string(), summary });
            }
        }
    }
    if recomputed != expected {
        return Err(CliError::Other("audit: aggregates do not match the raw rows".into()));
    }
    Ok(())
}

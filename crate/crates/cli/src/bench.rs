//! Batch runs and the comparison report.

use std::cmp::Ordering;
use std::io::Write;

use rayon::prelude::*;

use nspmr::{grid_oracle, run_with, PlannerKind, RunConfig, RunResult, Scenario, SimError};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scenario: String,
    /// Sensor range override, when the suite sweeps ranges.
    pub range: Option<f64>,
    pub planner: PlannerKind,
    pub result: RunResult,
    pub oracle: Option<f64>,
}

impl BenchRow {
    pub fn label(&self) -> String {
        match self.range {
            Some(d) => format!("{}@d={d}", self.scenario),
            None => self.scenario.clone(),
        }
    }

    pub fn ratio(&self) -> Option<f64> {
        self.oracle.map(|o| self.result.length / o)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub struct Job {
    pub scenario: Scenario,
    pub range: Option<f64>,
    pub planner: PlannerKind,
}

/// Runs every job (in parallel) and returns rows sorted by scenario,
/// range and planner. Bug planners are skipped on moving-obstacle worlds;
/// the skipped pairs are returned alongside.
pub fn run_jobs(jobs: Vec<Job>) -> Result<(BenchReport, Vec<(String, PlannerKind)>), SimError> {
    let (skipped, runnable): (Vec<Job>, Vec<Job>) = jobs
        .into_iter()
        .partition(|j| j.scenario.is_dynamic() && j.planner != PlannerKind::Nspmr);
    let mut rows = runnable
        .into_par_iter()
        .map(|job| {
            let mut s = job.scenario;
            if let Some(d) = job.range {
                s.sensor_range = d;
            }
            let (_, result) = run_with(&s, job.planner, RunConfig::default())?;
            // the lattice oracle only makes sense for a fixed map
            let oracle = if s.is_dynamic() { None } else { grid_oracle(&s, s.delta / 2.0) };
            Ok(BenchRow {
                scenario: s.name,
                range: job.range,
                planner: job.planner,
                result,
                oracle,
            })
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    rows.sort_by(|a, b| {
        a.scenario
            .cmp(&b.scenario)
            .then_with(|| a.range.partial_cmp(&b.range).unwrap_or(Ordering::Equal))
            .then_with(|| a.planner.name().cmp(b.planner.name()))
    });
    let skipped = skipped.into_iter().map(|j| (j.scenario.name, j.planner)).collect();
    Ok((BenchReport { rows }, skipped))
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map(|x| format!("{x:.digits$}")).unwrap_or_default()
}

impl BenchReport {
    pub const COLUMNS: [&'static str; 8] =
        ["scenario", "planner", "outcome", "length_m", "time_s", "iters", "oracle_m", "ratio"];

    fn cells(&self) -> Vec<[String; 8]> {
        self.rows
            .iter()
            .map(|r| {
                [
                    r.label(),
                    r.planner.name().to_string(),
                    r.result.outcome.as_str().to_string(),
                    format!("{:.3}", r.result.length),
                    format!("{:.3}", r.result.travel_time),
                    r.result.iterations.to_string(),
                    opt(r.oracle, 3),
                    opt(r.ratio(), 3),
                ]
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::COLUMNS)?;
        for row in self.cells() {
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Plain-text table with left-aligned names and right-aligned numbers.
    pub fn to_table(&self) -> String {
        let cells = self.cells();
        let mut widths: Vec<usize> = Self::COLUMNS.iter().map(|c| c.len()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |row: &[String]| {
            row.iter()
                .enumerate()
                .map(|(i, c)| {
                    if i < 3 {
                        format!("{c:<w$}", w = widths[i])
                    } else {
                        format!("{c:>w$}", w = widths[i])
                    }
                })
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let header: Vec<String> = Self::COLUMNS.iter().map(|s| s.to_string()).collect();
        let mut out = line(&header);
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

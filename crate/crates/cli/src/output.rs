//! CSV emission. Floats carry 17 significant digits so they round-trip.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use gossip_bandits::{partition_sticky_sets, Instance};

use crate::experiment::ExperimentOutput;
use crate::summary::{summarize, SummaryRecord};

pub const TRACE_HEADER: [&str; 6] = ["algorithm", "alpha", "sweep_value", "run", "t", "node_avg_regret"];
pub const SUMMARY_HEADER: [&str; 6] = ["algorithm", "alpha", "sweep_value", "t", "mean_regret", "ci_half_width"];
pub const REFERENCE_HEADER: [&str; 3] = ["quantity", "agent", "value"];

pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const REFERENCE_FILE: &str = "reference.csv";

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace(path: &Path, output: &ExperimentOutput) -> Result<()> {
    let rows = output.series.iter().flat_map(|s| {
        s.runs.iter().flat_map(move |r| {
            s.grid.iter().zip(&r.node_avg).map(move |(t, v)| {
                vec![
                    s.plan.label.clone(),
                    fmt_float(s.plan.alpha),
                    fmt_float(s.plan.sweep_value),
                    r.run.to_string(),
                    t.to_string(),
                    fmt_float(*v),
                ]
            })
        })
    });
    write_csv(path, &TRACE_HEADER, rows)
}

pub fn write_summary(path: &Path, records: &[SummaryRecord]) -> Result<()> {
    let rows = records.iter().map(|r| {
        vec![
            r.algorithm.clone(),
            fmt_float(r.alpha),
            fmt_float(r.sweep_value),
            r.t.to_string(),
            fmt_float(r.mean_regret),
            fmt_float(r.ci_half_width),
        ]
    });
    write_csv(path, &SUMMARY_HEADER, rows)
}

/// Lai–Robbins constant (agent column empty) and one asymptotic constant per
/// agent for the contiguous sticky-set partition.
pub fn write_reference(path: &Path, instance: &Instance) -> Result<()> {
    let mut rows = vec![vec![
        "lai_robbins_constant".to_string(),
        String::new(),
        fmt_float(instance.lai_robbins_constant()),
    ]];
    for (n, sticky) in partition_sticky_sets(instance.num_arms(), instance.num_agents())?
        .iter()
        .enumerate()
    {
        rows.push(vec![
            "agent_asymptotic_constant".to_string(),
            n.to_string(),
            fmt_float(instance.agent_asymptotic_constant(sticky)?),
        ]);
    }
    write_csv(path, &REFERENCE_HEADER, rows)
}

/// Writes trace and summary CSVs into `dir`, removing both if either fails.
pub fn write_experiment(dir: &Path, output: &ExperimentOutput) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let trace = dir.join(TRACE_FILE);
    let summary = dir.join(SUMMARY_FILE);
    let result = write_trace(&trace, output).and_then(|_| write_summary(&summary, &output.summary()));
    if let Err(e) = result {
        let _ = fs::remove_file(&trace);
        let _ = fs::remove_file(&summary);
        return Err(e);
    }
    Ok((trace, summary))
}

/// One parsed trace row.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub algorithm: String,
    pub alpha: f64,
    pub sweep_value: f64,
    pub run: u64,
    pub t: u64,
    pub node_avg_regret: f64,
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    ensure!(header == TRACE_HEADER, "{}: unexpected header {header:?}", path.display());
    let mut rows = Vec::new();
    for record in reader.records() {
        let r = record?;
        rows.push(TraceRow {
            algorithm: r[0].to_string(),
            alpha: r[1].parse()?,
            sweep_value: r[2].parse()?,
            run: r[3].parse()?,
            t: r[4].parse()?,
            node_avg_regret: r[5].parse()?,
        });
    }
    Ok(rows)
}

/// Rebuilds summary records from trace rows, keeping series in file order.
pub fn summarize_trace(rows: &[TraceRow]) -> Vec<SummaryRecord> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let key = (&rows[i].algorithm, rows[i].alpha.to_bits(), rows[i].sweep_value.to_bits());
        let mut j = i;
        while j < rows.len() && (&rows[j].algorithm, rows[j].alpha.to_bits(), rows[j].sweep_value.to_bits()) == key {
            j += 1;
        }
        let series = &rows[i..j];
        let first_run = series[0].run;
        let grid: Vec<u64> = series.iter().take_while(|r| r.run == first_run).map(|r| r.t).collect();
        let curves: Vec<Vec<f64>> = series
            .chunks(grid.len())
            .map(|chunk| chunk.iter().map(|r| r.node_avg_regret).collect())
            .collect();
        out.extend(summarize(&rows[i].algorithm, rows[i].alpha, rows[i].sweep_value, &grid, &curves));
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_float(15.0), "1.5000000000000000e1");
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        for x in [0.1, 2.252_099_698_524_529, 1e-300, 12_345.678_901_234_5, 0.0] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn reference_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(REFERENCE_FILE);
        let inst = Instance::new(vec![0.9, 0.8], 1).unwrap();
        write_reference(&path, &inst).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "quantity,agent,value");
        assert!(lines[1].starts_with("lai_robbins_constant,,2.25209969852452"));
        assert!(lines[2].starts_with("agent_asymptotic_constant,0,2.25209969852452"));
    }
}

use std::fs::{self, File};
use std::io::{Read, Write};
use std::path::Path;

use super::{CurvePoint, ExperimentConfig, ExperimentResult, HarnessError, RunLabel, Summary, TrialResult};
use crate::replay::ReplayStats;

const CURVE_HEADER: [&str; 6] = ["env", "sampler", "agent", "seed", "env_step", "eval_return"];

fn csv_err(e: csv::Error) -> HarnessError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::Io(io),
        other => HarnessError::Csv(format!("{other:?}")),
    }
}

/// Curve rows ordered by `(label, seed, env_step)`.
pub fn write_csv<W: Write>(results: &[TrialResult], w: W) -> Result<(), HarnessError> {
    let mut sorted: Vec<&TrialResult> = results.iter().collect();
    sorted.sort_by(|a, b| (&a.label, a.seed).cmp(&(&b.label, b.seed)));
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(CURVE_HEADER).map_err(csv_err)?;
    for t in sorted {
        let mut points = t.points.clone();
        points.sort_by_key(|p| p.env_step);
        for p in points {
            writer
                .write_record([
                    t.label.env.as_str(),
                    t.label.sampler.as_str(),
                    t.label.agent.as_str(),
                    &t.seed.to_string(),
                    &p.env_step.to_string(),
                    &p.eval_return.to_string(),
                ])
                .map_err(csv_err)?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Writes `env,sampler,agent,seed,env_step,eval_return` rows to `path`.
pub fn emit_csv(results: &[TrialResult], path: &Path) -> Result<(), HarnessError> {
    write_csv(results, File::create(path)?)
}

/// Inverse of [`write_csv`]: groups rows back into trials.
pub fn read_csv<R: Read>(r: R) -> Result<Vec<TrialResult>, HarnessError> {
    let mut reader = csv::Reader::from_reader(r);
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CURVE_HEADER) {
        return Err(HarnessError::Csv(format!("unexpected header {header:?}")));
    }
    let mut trials: Vec<TrialResult> = Vec::new();
    for (n, row) in reader.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let bad = |what: &str| HarnessError::Csv(format!("row {}: bad {what}", n + 2));
        let label = RunLabel::new(&row[0], &row[1], &row[2]);
        let seed: u64 = row[3].parse().map_err(|_| bad("seed"))?;
        let point = CurvePoint {
            env_step: row[4].parse().map_err(|_| bad("env_step"))?,
            eval_return: row[5].parse().map_err(|_| bad("eval_return"))?,
        };
        match trials.last_mut() {
            Some(t) if t.label == label && t.seed == seed => t.points.push(point),
            _ => trials.push(TrialResult {
                label,
                seed,
                points: vec![point],
            }),
        }
    }
    Ok(trials)
}

pub fn parse_csv(path: &Path) -> Result<Vec<TrialResult>, HarnessError> {
    read_csv(File::open(path)?)
}

/// Per-point mean, standard deviation and standard error.
pub fn emit_summary_csv(summary: &Summary, path: &Path) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    writer
        .write_record(["env_step", "mean", "std", "sem", "num_trials"])
        .map_err(csv_err)?;
    for i in 0..summary.env_steps.len() {
        writer
            .write_record([
                summary.env_steps[i].to_string(),
                summary.mean[i].to_string(),
                summary.std[i].to_string(),
                summary.sem[i].to_string(),
                summary.num_trials.to_string(),
            ])
            .map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}

/// Final replay-memory statistics per seed.
pub fn emit_replay_stats_csv(stats: &[(u64, ReplayStats)], path: &Path) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    writer
        .write_record([
            "seed",
            "size",
            "capacity",
            "num_keys",
            "max_multiplicity",
            "redundancy_fraction",
        ])
        .map_err(csv_err)?;
    for (seed, s) in stats {
        writer
            .write_record([
                seed.to_string(),
                s.size.to_string(),
                s.capacity.to_string(),
                s.num_keys.to_string(),
                s.max_multiplicity.to_string(),
                s.redundancy_fraction.to_string(),
            ])
            .map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes `config.txt`, `curves.csv`, `summary.csv`, `replay_stats.csv` and
/// `curves.svg` into the configured output directory.
pub fn write_run_outputs(config: &ExperimentConfig, result: &ExperimentResult) -> Result<(), HarnessError> {
    let dir = &config.out_dir;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.txt"), config.to_text())?;
    emit_csv(&result.trials, &dir.join("curves.csv"))?;
    emit_summary_csv(&result.summary, &dir.join("summary.csv"))?;
    emit_replay_stats_csv(&result.replay_stats, &dir.join("replay_stats.csv"))?;
    if result.summary.env_steps.len() >= 2 {
        let label = RunLabel::of(config).to_string();
        super::emit_svg_plot(&[(label, result.summary.clone())], &dir.join("curves.svg"))?;
    }
    Ok(())
}

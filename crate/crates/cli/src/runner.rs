//! Executing experiments: independent seeded runs, matrices of cells, and
//! stream dumps.

use std::path::Path;

use mddm::eval::{aggregate, score_run, AggregateRow, DriftScore};
use mddm::learners::{NaiveBayes, Prequential, RunRecord};
use mddm::stream::{
    generate_stream, load_csv_stream, write_csv_stream, CsvSchema, LabeledInstance, StreamSpec,
};
use mddm::DriftDetector;
use rayon::prelude::*;

use crate::config::{Cell, ExperimentConfig, StreamSource};
use crate::error::{CliError, Result};

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub stream: String,
    pub detector: String,
    pub seed: u64,
    pub run: usize,
    pub score: DriftScore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<RunRow>,
    pub aggregate: AggregateRow,
}

#[derive(Debug)]
pub struct CellOutcome {
    pub stream: String,
    pub detector: String,
    pub result: Result<ExperimentResult>,
}

/// The synthetic stream of run `run` (seed `base + run`).
pub fn stream_spec(cfg: &ExperimentConfig, run: usize) -> Result<Option<StreamSpec>> {
    let StreamSource::Synthetic(family) = cfg.stream else {
        return Ok(None);
    };
    let seed = cfg.seed.wrapping_add(run as u64);
    let spec = StreamSpec::new(family, seed)
        .with_length(cfg.length)
        .with_noise(cfg.noise)
        .with_schedule(family.default_schedule(cfg.length)?);
    spec.validate()?;
    Ok(Some(spec))
}

fn feed<I>(instances: I, cfg: &ExperimentConfig) -> Result<RunRecord>
where
    I: Iterator<Item = mddm::Result<LabeledInstance>>,
{
    let mut detector = cfg.detector.build(cfg.window_size)?;
    let policy = cfg.detector.adaptation(cfg.keep_model)?;
    let mut model = NaiveBayes::new();
    let detector = detector.as_mut().map(|d| &mut **d as &mut dyn DriftDetector);
    let mut run = Prequential::new(&mut model, detector, policy)?;
    for instance in instances {
        run.process(&instance?)?;
    }
    Ok(run.finish())
}

/// Runs one seed of an experiment.
pub fn run_once(cfg: &ExperimentConfig, run: usize) -> Result<RunRow> {
    let seed = cfg.seed.wrapping_add(run as u64);
    let score = match &cfg.stream {
        StreamSource::Synthetic(_) => {
            let spec = stream_spec(cfg, run)?.expect("synthetic source");
            let record = feed(generate_stream(&spec)?.map(Ok), cfg)?;
            score_run(
                &record.alarms,
                spec.schedule.positions(),
                cfg.accept_delay,
                cfg.length,
            )?
            .with_accuracy(record.accuracy())
        }
        StreamSource::Csv(path) => {
            let record = feed(load_csv_stream(path, &CsvSchema::inferred())?, cfg)?;
            DriftScore::alarms_only(record.alarms.len() as u64).with_accuracy(record.accuracy())
        }
    };
    Ok(RunRow {
        stream: cfg.stream_name(),
        detector: cfg.detector_label(),
        seed,
        run,
        score,
    })
}

/// Runs `cfg.runs` independent runs (in parallel) and aggregates them.
/// Rows come back in run order whatever the scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let rows = (0..cfg.runs)
        .into_par_iter()
        .map(|run| run_once(cfg, run))
        .collect::<Result<Vec<_>>>()?;
    let scores: Vec<DriftScore> = rows.iter().map(|r| r.score.clone()).collect();
    let aggregate = aggregate(&cfg.stream_name(), &cfg.detector_label(), &scores)?;
    Ok(ExperimentResult { rows, aggregate })
}

/// Runs every cell; a failing cell does not stop the others.
pub fn run_matrix(cells: Vec<Cell>) -> Vec<CellOutcome> {
    cells
        .into_par_iter()
        .map(|cell| CellOutcome {
            stream: cell.stream,
            detector: cell.detector,
            result: cell.config.and_then(|cfg| run_experiment(&cfg)),
        })
        .collect()
}

/// Writes a synthetic stream to CSV: attribute columns, then `class`.
pub fn dump_stream(spec: &StreamSpec, path: &Path) -> Result<()> {
    spec.validate()?;
    let names = spec.family.attribute_names();
    write_csv_stream(path, &names, generate_stream(spec)?).map_err(|e| match e {
        mddm::Error::Io(source) => CliError::Output {
            path: path.to_owned(),
            source,
        },
        other => other.into(),
    })
}

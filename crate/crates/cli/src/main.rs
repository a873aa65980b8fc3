use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mddm::stream::{Family, StreamSpec, DEFAULT_LENGTH, DEFAULT_NOISE};
use mddm_cli::config::DEFAULT_SEED;
use mddm_cli::{dump_stream, report, run_matrix, CliError, Settings, StreamSource};

#[derive(Parser)]
#[command(name = "mddm", version, about = "Concept-drift detection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one stream with one detector over several seeds.
    Run(ExperimentArgs),
    /// Run every (stream, detector, --set sweep) combination.
    Matrix(ExperimentArgs),
    /// Write a synthetic stream to CSV.
    Dump(DumpArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// Stream(s): sine1, mixed, circles, led, or a .csv path. Comma-separated.
    #[arg(long, value_delimiter = ',')]
    stream: Vec<String>,
    /// Detector(s): mddm-a, mddm-g, mddm-e, fhddm, cusum, page-hinkley,
    /// ddm, eddm, rddm, adwin, none, blind. Comma-separated.
    #[arg(long, value_delimiter = ',')]
    detector: Vec<String>,
    /// Number of runs; run i uses seed + i [default: 100, 1 for CSV streams].
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed [default: 1].
    #[arg(long)]
    seed: Option<u64>,
    /// Instances per synthetic stream [default: 100000].
    #[arg(long)]
    length: Option<u64>,
    /// Window size of the MDDM family [default: 25, 100 on circles and led].
    #[arg(long)]
    window_size: Option<usize>,
    /// Confidence delta of the MDDM family [default: 1e-6].
    #[arg(long)]
    delta: Option<f64>,
    /// Acceptable delay [default: 250, 1000 on circles and led].
    #[arg(long)]
    accept_delay: Option<u64>,
    /// Class noise rate [default: 0.1].
    #[arg(long)]
    noise: Option<f64>,
    /// What happens to the classifier on an alarm: reset or keep [default: reset].
    #[arg(long)]
    policy: Option<String>,
    /// Per-run CSV; aggregates go to <stem>_aggregate.csv next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the first run's stream to this CSV file.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Detector parameter, KEY=VALUE or KEY=V1|V2|... to sweep. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Config file with one `key = value` per line (flag names without dashes).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    /// sine1, mixed, circles or led.
    #[arg(long)]
    stream: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_LENGTH)]
    length: u64,
    #[arg(long, default_value_t = DEFAULT_NOISE)]
    noise: f64,
    #[arg(long)]
    out: PathBuf,
}

impl ExperimentArgs {
    fn settings(self) -> Result<Settings, CliError> {
        let flags = Settings {
            streams: self.stream,
            detectors: self.detector,
            runs: self.runs,
            seed: self.seed,
            length: self.length,
            window_size: self.window_size,
            delta: self.delta,
            accept_delay: self.accept_delay,
            noise: self.noise,
            policy: self.policy,
            out: self.out,
            dump: self.dump,
            sets: self.sets,
        };
        Ok(match self.config {
            Some(path) => Settings::from_config_file(&path)?.overlay(flags),
            None => flags,
        })
    }
}

fn synthetic_spec(stream: &str, seed: u64, length: u64, noise: f64) -> Result<StreamSpec, CliError> {
    let family = match stream.parse::<StreamSource>()? {
        StreamSource::Synthetic(f) => f,
        StreamSource::Csv(_) => return Err(CliError::usage("only synthetic streams can be dumped")),
    };
    Ok(StreamSpec::new(family, seed)
        .with_length(length)
        .with_noise(noise)
        .with_schedule(Family::default_schedule(&family, length)?))
}

fn experiment(args: ExperimentArgs, single: bool) -> Result<i32, CliError> {
    let settings = args.settings()?;
    let cells = settings.cells()?;
    if single && cells.len() != 1 {
        return Err(CliError::usage(
            "run takes exactly one stream and one detector without sweeps; use matrix",
        ));
    }
    if let Some(path) = &settings.dump {
        let stream = settings.streams.first().ok_or_else(|| CliError::usage("--dump needs --stream"))?;
        let spec = synthetic_spec(
            stream,
            settings.seed.unwrap_or(DEFAULT_SEED),
            settings.length.unwrap_or(DEFAULT_LENGTH),
            settings.noise.unwrap_or(DEFAULT_NOISE),
        )?;
        dump_stream(&spec, path)?;
    }

    let outcomes = run_matrix(cells);
    let mut rows = Vec::new();
    let mut aggregates = Vec::new();
    let mut code = 0;
    for outcome in outcomes {
        match outcome.result {
            Ok(result) => {
                rows.extend(result.rows);
                aggregates.push(result.aggregate);
            }
            Err(e) => {
                eprintln!("error: {} / {}: {e}", outcome.stream, outcome.detector);
                code = code.max(e.exit_code());
            }
        }
    }
    print!("{}", report::console_table(&aggregates));
    if let Some(out) = &settings.out {
        report::write_reports(out, &rows, &aggregates)?;
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => experiment(args, true),
        Command::Matrix(args) => experiment(args, false),
        Command::Dump(args) => synthetic_spec(&args.stream, args.seed, args.length, args.noise)
            .and_then(|spec| dump_stream(&spec, &args.out))
            .map(|()| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

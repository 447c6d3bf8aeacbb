use clap::Parser;
use periodlab::experiments::{run, Experiment, ExperimentConfig};
use periodlab::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Period-function experiments; writes CSV to --out or stdout.
#[derive(Parser, Debug)]
#[command(name = "periodlab", version)]
struct Cli {
    /// compensator, traces, scan-power, scan-loud or verify-identities
    #[arg(long)]
    experiment: Option<String>,
    /// key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path (relative paths honour PERIODLAB_OUTPUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// acceptance tolerance override
    #[arg(long)]
    tol: Option<f64>,
    /// worker threads
    #[arg(long)]
    parallel: Option<usize>,
    /// seed for randomized suites
    #[arg(long)]
    seed: Option<u64>,
}

fn configure(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let text = match &cli.config {
        Some(path) => {
            Some(std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    // the experiment may come from the file or the flag; the flag wins
    let mut config = ExperimentConfig::new(Experiment::Compensator);
    if let Some(text) = &text {
        config.apply_text(text)?;
    }
    match &cli.experiment {
        Some(name) => config.experiment = name.parse()?,
        None if text.as_deref().is_some_and(|t| t.lines().any(|l| l.trim_start().starts_with("experiment"))) => {}
        None => return Err(Error::Config("no experiment given".into())),
    }
    if cli.out.is_some() {
        config.out = cli.out.clone();
    }
    if cli.tol.is_some() {
        config.tol = cli.tol;
    }
    if cli.parallel.is_some() {
        config.parallel = cli.parallel;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn execute(config: &ExperimentConfig) -> Result<bool, Error> {
    let report = match config.parallel {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| run(config))?,
        None => run(config)?,
    };
    match config.output_path() {
        Some(path) => {
            let file = std::fs::File::create(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            report.write_csv(file)?;
        }
        None => report.write_csv(std::io::stdout().lock())?,
    }
    for line in &report.summary {
        eprintln!("{line}");
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match configure(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("periodlab: {e}");
            return ExitCode::from(3);
        }
    };
    match execute(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("periodlab: acceptance failure");
            ExitCode::from(2)
        }
        Err(Error::Config(msg)) => {
            eprintln!("periodlab: configuration error: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("periodlab: {e}");
            ExitCode::from(2)
        }
    }
}

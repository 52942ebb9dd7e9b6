use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgan_sim::config::SEED_ENV;
use qgan_sim::error::{CliError, CliResult};
use qgan_sim::table::{cdf_csv, snapshot_csv, tracking_csv, trajectory_csv, turn_boundary_steps};
use qgan_sim::{run_batch, run_single, BatchSummary, ExperimentConfig, ResultDocument};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "qgan-sim", version, about = "Single-qubit adversarial learning simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and write result.json and trajectory.csv.
    Run(RunArgs),
    /// Play N games and write summary.json plus CDF tables.
    Batch(BatchArgs),
    /// Convert a result or summary into a plot-ready CSV.
    PlotData(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides QGAN_SIM_SEED and the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BatchArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write every game's result and trajectory under traces/.
    #[arg(long)]
    emit_traces: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    Tracking,
    BlochSnapshots,
    Cdf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    CStep,
    Fidelity,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, value_enum)]
    kind: PlotKind,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Snapshot steps; defaults to step 0 and every turn boundary.
    #[arg(long, value_delimiter = ',')]
    steps: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value = "c-step")]
    quantity: Quantity,
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    write(path, &text)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

fn load_config(args: &RunArgs) -> CliResult<ExperimentConfig> {
    let mut config = ExperimentConfig::load(&args.config)?;
    config.apply_seed_override(args.seed, std::env::var(SEED_ENV).ok().as_deref())?;
    Ok(config)
}

fn write_game(dir: &Path, stem: &str, doc: ResultDocument) -> CliResult<()> {
    write(&dir.join(format!("{stem}trajectory.csv")), &trajectory_csv(&doc.trace))?;
    write_json(&dir.join(format!("{stem}result.json")), &doc)
}

fn run(args: RunArgs) -> CliResult<()> {
    let config = load_config(&args)?;
    let trace = run_single(&config)?;
    create_dir(&args.out)?;
    println!(
        "c_step={} F={:.6} termination={}",
        trace.c_step_total,
        trace.final_fidelity,
        trace.termination.label()
    );
    write_game(&args.out, "", ResultDocument::new(&config, trace))
}

fn batch(args: BatchArgs) -> CliResult<()> {
    let config = load_config(&args.run)?;
    let traces = run_batch(&config, args.n, args.jobs)?;
    let summary = BatchSummary::from_traces(&config, &traces);
    let out = &args.run.out;
    create_dir(out)?;
    write_json(&out.join("summary.json"), &summary)?;
    write(&out.join("cdf_c_step.csv"), &cdf_csv(&summary.cdf_c_step))?;
    write(&out.join("cdf_fidelity.csv"), &cdf_csv(&summary.cdf_fidelity))?;
    if args.emit_traces {
        let dir = out.join("traces");
        create_dir(&dir)?;
        for (k, trace) in traces.into_iter().enumerate() {
            let game = config.with_seed(trace.config.seed);
            write_game(&dir, &format!("game_{k:04}_"), ResultDocument::new(&game, trace))?;
        }
    }
    println!(
        "games={} mean_c_step={:.2} mean_F={:.6} equilibrium={}",
        summary.games, summary.mean_c_step, summary.mean_fidelity, summary.termination_counts.equilibrium
    );
    Ok(())
}

fn plot_data(args: PlotArgs) -> CliResult<()> {
    let csv = match args.kind {
        PlotKind::Tracking => tracking_csv(&read_json::<ResultDocument>(&args.input)?.trace),
        PlotKind::BlochSnapshots => {
            let trace = read_json::<ResultDocument>(&args.input)?.trace;
            let steps = args.steps.unwrap_or_else(|| turn_boundary_steps(&trace));
            snapshot_csv(&trace, &steps)?
        }
        PlotKind::Cdf => {
            let summary: BatchSummary = read_json(&args.input)?;
            match args.quantity {
                Quantity::CStep => cdf_csv(&summary.cdf_c_step),
                Quantity::Fidelity => cdf_csv(&summary.cdf_fidelity),
            }
        }
    };
    write(&args.out, &csv)
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Batch(args) => batch(args),
        Command::PlotData(args) => plot_data(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("qgan-sim: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

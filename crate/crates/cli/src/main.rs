use clap::{Args, Parser, Subcommand};
use dimincr_cli::commands::{self, report_sweep};
use dimincr_cli::theory_args::TheoryCommand;
use dimincr_cli::{CliResult, ExperimentConfig, Mode};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Dimension-incremental sparse approximation experiments.
#[derive(Parser)]
#[command(name = "dimincr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seeded sweep over the configured sparsities; writes per-run and summary CSV.
    Approximate(RunArgs),
    /// Exact support recovery rate for sparse random functions.
    RecoverSparse(RunArgs),
    /// Best s-term truncation of the configured function within the search space.
    Oracle {
        #[command(flatten)]
        common: ConfigArgs,
        #[arg(long)]
        s: usize,
        /// Repetition whose function is used (matters for sparse-random).
        #[arg(long, default_value_t = 0)]
        run: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the probabilistic bounds.
    #[command(subcommand)]
    Theory(TheoryCommand),
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML configuration, or JSON when the extension is `.json`.
    #[arg(short, long)]
    config: PathBuf,
    /// Override a configuration key, e.g. `--set space.d=8` or `--set s=[10,20]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: ConfigArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    method: Option<String>,
    /// Record wall-clock seconds per run.
    #[arg(long)]
    timings: bool,
}

impl RunArgs {
    fn overrides(&self) -> Vec<String> {
        let mut v = self.common.set.clone();
        let quote = |s: &str| format!("{s:?}");
        if let Some(o) = &self.output {
            v.push(format!("output={}", quote(&o.to_string_lossy())));
        }
        if let Some(s) = self.seed {
            v.push(format!("seed={s}"));
        }
        if let Some(r) = self.runs {
            v.push(format!("runs={r}"));
        }
        if let Some(s) = &self.strategy {
            v.push(format!("strategy={}", quote(s)));
        }
        if let Some(m) = &self.method {
            v.push(format!("method={}", quote(m)));
        }
        if self.timings {
            v.push("timings=true".into());
        }
        v
    }
}

fn run_sweep_command(args: &RunArgs, mode: Mode) -> CliResult<()> {
    let exp = ExperimentConfig::load(&args.common.config, &args.overrides())?.build()?;
    let rep = commands::sweep(&exp, mode)?;
    report_sweep(&exp, &rep, mode, &mut std::io::stdout().lock())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Approximate(a) => run_sweep_command(&a, Mode::Approximate),
        Command::RecoverSparse(a) => run_sweep_command(&a, Mode::RecoverSparse),
        Command::Oracle { common, s, run, output } => {
            let exp = ExperimentConfig::load(&common.config, &common.set)?.build()?;
            let text = commands::oracle(&exp, s, run)?;
            match output {
                Some(p) => std::fs::write(p, text)?,
                None => std::io::stdout().lock().write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Theory(t) => {
            let text = t.evaluate()?;
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}


use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use jrsp::harness::{execute, parse_force_outcome, Command, HarnessError, Mode, OutputFormat, ProfileSource, RunConfig};

#[derive(Parser)]
#[command(name = "jrsp", version, about = "Joint remote preparation of four-qubit chi-type states")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run a verification campaign and emit a report.
    Verify(Flags),
    /// Execute one protocol branch and emit its transcript.
    Run(Flags),
    /// Emit the correction table.
    Table(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Structured,
    Table,
}

#[derive(Args)]
struct Flags {
    #[arg(long, default_value_t = 2)]
    senders: usize,
    /// Enumerate every branch instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    /// Exhaustive: random profiles. Sampled: branches.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON profile document.
    #[arg(long, conflicts_with = "random")]
    profile: Option<PathBuf>,
    /// Draw the profile from the seed (default).
    #[arg(long)]
    random: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Structured)]
    format: FormatArg,
    /// K:J1[,J2,...]
    #[arg(long)]
    force_outcome: Option<String>,
}

impl Flags {
    fn config(self) -> Result<RunConfig, HarnessError> {
        Ok(RunConfig {
            senders: self.senders,
            mode: if self.exhaustive { Mode::Exhaustive } else { Mode::Sampled },
            trials: self.trials,
            seed: self.seed,
            profile: self.profile.map_or(ProfileSource::Random, ProfileSource::File),
            output: self.out,
            format: match self.format {
                FormatArg::Structured => OutputFormat::Structured,
                FormatArg::Table => OutputFormat::Table,
            },
            force_outcome: self.force_outcome.as_deref().map(parse_force_outcome).transpose()?,
            basis_perturbation: None,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (command, flags) = match cli.command {
        Sub::Verify(f) => (Command::Verify, f),
        Sub::Run(f) => (Command::Run, f),
        Sub::Table(f) => (Command::Table, f),
    };
    match flags.config().and_then(|c| execute(command, &c)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("jrsp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

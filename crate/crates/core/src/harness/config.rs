use std::path::PathBuf;

use crate::protocol::{Outcome, MAX_ENUMERATED_SENDERS};

use super::HarnessError;

/// Largest sender count the CLI accepts (register of `3(N+1)` qubits).
pub const MAX_CLI_SENDERS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileSource {
    Random,
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    /// JSON document.
    Structured,
    /// CSV rows.
    Table,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Structured => "structured",
            OutputFormat::Table => "table",
        }
    }
}

/// Everything a command needs; built from CLI flags or directly in tests.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub senders: usize,
    pub mode: Mode,
    /// Exhaustive: number of random profiles. Sampled: number of branches.
    pub trials: usize,
    pub seed: u64,
    pub profile: ProfileSource,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub force_outcome: Option<Outcome>,
    /// Added to one entry of the amplitude basis before validation.
    pub basis_perturbation: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            senders: 2,
            mode: Mode::Sampled,
            trials: 1,
            seed: 0,
            profile: ProfileSource::Random,
            output: None,
            format: OutputFormat::Structured,
            force_outcome: None,
            basis_perturbation: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.senders < 2 || self.senders > MAX_CLI_SENDERS {
            return Err(HarnessError::Usage(format!(
                "--senders must be between 2 and {MAX_CLI_SENDERS}, got {}",
                self.senders
            )));
        }
        if self.trials == 0 {
            return Err(HarnessError::Usage("--trials must be at least 1".into()));
        }
        if self.mode == Mode::Exhaustive && self.senders > MAX_ENUMERATED_SENDERS {
            return Err(HarnessError::Usage(format!(
                "--exhaustive supports at most {MAX_ENUMERATED_SENDERS} senders, got {}",
                self.senders
            )));
        }
        if let Some(o) = &self.force_outcome {
            if o.n_senders() != self.senders {
                return Err(HarnessError::Usage(format!(
                    "--force-outcome names {} senders but --senders is {}",
                    o.n_senders(),
                    self.senders
                )));
            }
        }
        Ok(())
    }
}

/// Parses `K:J1[,J2,...]`.
pub fn parse_force_outcome(text: &str) -> Result<Outcome, HarnessError> {
    let bad = || HarnessError::Usage(format!("--force-outcome expects K:J1[,J2,...], got {text:?}"));
    let (k, js) = text.split_once(':').ok_or_else(bad)?;
    let alice: usize = k.trim().parse().map_err(|_| bad())?;
    let bobs = js
        .split(',')
        .map(|j| j.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    Outcome::new(alice, bobs).map_err(|e| HarnessError::Usage(e.to_string()))
}

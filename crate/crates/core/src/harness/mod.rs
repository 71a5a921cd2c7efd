//! Command layer behind the `jrsp` binary.
//!
//! Each command takes a [`RunConfig`] and returns a document plus an
//! [`ExitStatus`]; [`execute`] renders the document and writes it out.

mod config;
mod profile;
mod report;

use std::io::Write;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bases::validate_orthonormal;
use crate::error::Error;
use crate::protocol::sampling::random_instance;
use crate::protocol::{
    build_correction_table, build_correction_table_for, BasisLabel, CorrectionBook, CorrectionTable,
    ProtocolTranscript, Session, MAX_ENUMERATED_SENDERS,
};
use crate::qstate::FIDELITY_TOL;

pub use config::{parse_force_outcome, Mode, OutputFormat, ProfileSource, RunConfig, MAX_CLI_SENDERS};
pub use profile::{load_profile, LoadedProfile, ProfileDocument};
pub use report::{
    amplitude_pairs, nums, report_csv, run_csv, table_csv, to_json, Aggregates, BasisCheck, BranchRecord, ConfigEcho,
    Num, ProfileEcho, RunDocument, StepDoc, TableDocument, TableEntryDoc, VerificationReport,
};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("malformed profile: {0}")]
    MalformedProfile(String),
    #[error("normalization: {0}")]
    Normalization(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("correction oracle: {0}")]
    Oracle(Error),
    #[error("engine: {0}")]
    Engine(Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_)
            | HarnessError::MalformedProfile(_)
            | HarnessError::Normalization(_)
            | HarnessError::Io(_) => 2,
            HarnessError::Oracle(_) | HarnessError::Engine(_) => 3,
        }
    }
}

impl From<Error> for HarnessError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoCorrectionFound { .. } | Error::CorrectionNotPortable { .. } => HarnessError::Oracle(e),
            other => HarnessError::Engine(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    VerificationFailure = 1,
}

impl ExitStatus {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            ExitStatus::Pass
        } else {
            ExitStatus::VerificationFailure
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Run,
    Table,
}

fn engine_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

fn profile_echo(p: &LoadedProfile) -> ProfileEcho {
    ProfileEcho {
        x: nums(p.x.values()),
        delta: nums(p.delta.values()),
        shares: p.shares.rows().iter().map(|r| nums(r.values())).collect(),
    }
}

fn open_session(config: &RunConfig, p: &LoadedProfile) -> Result<Session, HarnessError> {
    let session = if config.senders == 2 {
        Session::two_sender(&p.x, &p.delta)?
    } else {
        Session::n_sender(config.senders, &p.x, &p.shares)?
    };
    Ok(session)
}

/// Draws `count` profiles from `rng`, or loads the single file profile.
fn profiles(config: &RunConfig, rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<LoadedProfile>, HarnessError> {
    match &config.profile {
        ProfileSource::File(path) => Ok(vec![load_profile(path, config.senders)?]),
        ProfileSource::Random => (0..count)
            .map(|_| Ok(random_instance(rng, config.senders)?.into()))
            .collect(),
    }
}

fn config_echo(config: &RunConfig) -> ConfigEcho {
    ConfigEcho {
        senders: config.senders,
        mode: config.mode.name().to_string(),
        trials: config.trials,
        seed: config.seed,
        profile: match &config.profile {
            ProfileSource::Random => "random".to_string(),
            ProfileSource::File(p) => p.display().to_string(),
        },
        format: config.format.name().to_string(),
        basis_perturbation: config.basis_perturbation.map(Num),
    }
}

/// Folds one session's basis deviations into `checks`, keeping the maximum per label.
fn record_bases(session: &Session, checks: &mut Vec<BasisCheck>) {
    for (label, basis) in session.bases() {
        let r = validate_orthonormal(basis);
        let name = label.to_string();
        match checks.iter_mut().find(|c| c.basis == name) {
            Some(c) => {
                c.max_deviation = Num(c.max_deviation.0.max(r.max_deviation));
                c.pass &= r.pass;
            }
            None => checks.push(BasisCheck {
                basis: name,
                max_deviation: Num(r.max_deviation),
                pass: r.pass,
            }),
        }
    }
}

/// Runs a verification campaign.
pub fn cmd_verify(config: &RunConfig) -> Result<(ExitStatus, VerificationReport), HarnessError> {
    config.validate()?;
    if config.force_outcome.is_some() {
        return Err(HarnessError::Usage("--force-outcome applies to run and table only".into()));
    }
    let exhaustive = config.mode == Mode::Exhaustive;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let loaded = profiles(config, &mut rng, if exhaustive { config.trials } else { 1 })?;
    let mut book = CorrectionBook::new(config.senders)?;
    let mut checks = Vec::new();
    let mut branches = Vec::new();
    for (index, p) in loaded.iter().enumerate() {
        let mut session = open_session(config, p)?;
        if let Some(eps) = config.basis_perturbation {
            let eta = session
                .bases()
                .into_iter()
                .find(|(l, _)| *l == BasisLabel::Eta)
                .map(|(_, b)| b.perturbed(0, 0, eps))
                .ok_or_else(|| HarnessError::Usage("no amplitude basis to perturb".into()))?;
            session.override_basis(BasisLabel::Eta, eta)?;
        }
        let before = checks.iter().all(|c: &BasisCheck| c.pass);
        record_bases(&session, &mut checks);
        if !(before && checks.iter().all(|c| c.pass)) {
            continue;
        }
        let transcripts: Vec<ProtocolTranscript> = if exhaustive {
            session.exhaustive(&mut book)?
        } else {
            (0..config.trials)
                .map(|_| session.sample(&mut rng, &mut book))
                .collect::<Result<_, _>>()?
        };
        branches.extend(transcripts.iter().map(|t| BranchRecord::from_transcript(index, t)));
    }
    let mut report = VerificationReport {
        engine_version: engine_version(),
        config: config_echo(config),
        passed: false,
        aggregates: Aggregates {
            profile_count: 0,
            branch_count: 0,
            min_fidelity: Num(0.0),
            max_probability_sum_deviation: Num(0.0),
            classical_bits_per_run: 0,
            bases_pass: false,
        },
        basis_validation: checks,
        profiles: loaded.iter().map(profile_echo).collect(),
        branches,
    };
    report.aggregates = report.recompute_aggregates(exhaustive);
    let a = &report.aggregates;
    report.passed = a.bases_pass
        && a.branch_count > 0
        && a.min_fidelity.0 >= 1.0 - FIDELITY_TOL
        && a.max_probability_sum_deviation.0 <= FIDELITY_TOL;
    Ok((ExitStatus::from_pass(report.passed), report))
}

/// Executes one branch: forced if configured, otherwise sampled.
pub fn cmd_run(config: &RunConfig) -> Result<(ExitStatus, RunDocument), HarnessError> {
    config.validate()?;
    if config.mode == Mode::Exhaustive {
        return Err(HarnessError::Usage("run executes a single branch; use verify --exhaustive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let p = profiles(config, &mut rng, 1)?.remove(0);
    let mut session = open_session(config, &p)?;
    let mut book = CorrectionBook::new(config.senders)?;
    let t = match &config.force_outcome {
        Some(o) => session.forced(o, &mut book)?,
        None => session.sample(&mut rng, &mut book)?,
    };
    let passed = t.fidelity >= 1.0 - FIDELITY_TOL;
    let doc = RunDocument {
        engine_version: engine_version(),
        senders: config.senders,
        seed: config.seed,
        channel: t.channel.clone(),
        profile: profile_echo(&p),
        steps: t
            .steps
            .iter()
            .map(|s| StepDoc {
                party: s.party.to_string(),
                basis: s.basis.to_string(),
                outcome: s.outcome,
                probability: Num(s.probability),
                bits: s.bits,
            })
            .collect(),
        outcome: t.outcome.to_string(),
        probability: Num(t.probability),
        classical_bits: t.classical_bits,
        pre_correction: amplitude_pairs(&t.pre_correction),
        correction: t.correction.symbols(),
        final_state: amplitude_pairs(&t.final_state),
        target_state: amplitude_pairs(session.target()),
        fidelity: Num(t.fidelity),
        passed,
    };
    Ok((ExitStatus::from_pass(passed), doc))
}

/// Full table for `N <= 3`; the forced outcome alone otherwise.
pub fn cmd_table(config: &RunConfig) -> Result<(ExitStatus, CorrectionTable), HarnessError> {
    config.validate()?;
    let table = match &config.force_outcome {
        Some(o) => build_correction_table_for(config.senders, [o.clone()])?,
        None if config.senders <= MAX_ENUMERATED_SENDERS => build_correction_table(config.senders)?,
        None => {
            return Err(HarnessError::Usage(format!(
                "a full table needs --senders <= {MAX_ENUMERATED_SENDERS}; pass --force-outcome for one row"
            )))
        }
    };
    let pass = table.iter().all(|(_, e)| e.verification_fidelity >= 1.0 - FIDELITY_TOL);
    Ok((ExitStatus::from_pass(pass), table))
}

/// Runs `command` and renders its document in the configured format.
pub fn render(command: Command, config: &RunConfig) -> Result<(ExitStatus, String), HarnessError> {
    let structured = config.format == OutputFormat::Structured;
    match command {
        Command::Verify => {
            let (status, r) = cmd_verify(config)?;
            Ok((status, if structured { to_json(&r)? } else { report_csv(&r)? }))
        }
        Command::Run => {
            let (status, d) = cmd_run(config)?;
            Ok((status, if structured { to_json(&d)? } else { run_csv(&d)? }))
        }
        Command::Table => {
            let (status, t) = cmd_table(config)?;
            Ok((status, if structured { to_json(&TableDocument::new(&t))? } else { table_csv(&t)? }))
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io(e.to_string());
    match path {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io)?;
            out.flush().map_err(io)
        }
    }
}

/// Renders and writes; returns the process exit code.
pub fn execute(command: Command, config: &RunConfig) -> Result<i32, HarnessError> {
    let (status, text) = render(command, config)?;
    write_output(config.output.as_deref(), &text)?;
    Ok(status.code())
}


use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bases::{AmplitudeProfile, PhaseProfile, PhaseShares};
use crate::error::{Error, Result};
use crate::qstate::{fidelity_up_to_phase, BasisSet, StateVector};

use super::branch::{BasisLabel, BranchLeaf, BranchSimulator, MeasurementRecord, Phases};
use super::correction::{CorrectionBook, CorrectionTriple, Outcome};
use super::target::{parity_expand, target_state};

/// Total announced bits for `n_senders`: three per sender.
pub fn classical_cost(n_senders: usize) -> u32 {
    3 * n_senders as u32
}

/// Which branches a run produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Every joint outcome.
    Exhaustive,
    /// One branch drawn from the outcome distribution.
    Sampled { seed: u64 },
    /// The named branch.
    Forced(Outcome),
}

/// Complete record of one branch.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolTranscript {
    pub n_senders: usize,
    pub channel: String,
    pub steps: Vec<MeasurementRecord>,
    pub outcome: Outcome,
    /// Joint probability of this branch.
    pub probability: f64,
    pub classical_bits: u32,
    /// Charlie's collapsed state before correction.
    pub pre_correction: StateVector,
    pub correction: CorrectionTriple,
    pub final_state: StateVector,
    pub fidelity: f64,
}

/// One protocol instance with its measurement tree.
#[derive(Debug)]
pub struct Session {
    sim: BranchSimulator,
    target: StateVector,
}

impl Session {
    pub fn two_sender(x: &AmplitudeProfile, delta: &PhaseProfile) -> Result<Self> {
        Self::new(x, Phases::Joint(delta.clone()))
    }

    pub fn n_sender(n_senders: usize, x: &AmplitudeProfile, shares: &PhaseShares) -> Result<Self> {
        if shares.n_senders() != n_senders {
            return Err(Error::ShareCount {
                rows: shares.rows().len(),
                senders: n_senders,
                expected: n_senders.saturating_sub(1),
            });
        }
        Self::new(x, Phases::Shared(shares.clone()))
    }

    pub fn new(x: &AmplitudeProfile, phases: Phases) -> Result<Self> {
        let target = target_state(x, &phases.composed());
        Ok(Self {
            sim: BranchSimulator::new(x, phases)?,
            target,
        })
    }

    pub fn n_senders(&self) -> usize {
        self.sim.layout().n_senders()
    }

    pub fn target(&self) -> &StateVector {
        &self.target
    }

    pub fn bases(&self) -> Vec<(BasisLabel, &BasisSet)> {
        self.sim.bases()
    }

    pub fn override_basis(&mut self, label: BasisLabel, basis: BasisSet) -> Result<()> {
        self.sim.override_basis(label, basis)
    }

    pub fn run(&mut self, policy: &Policy, book: &mut CorrectionBook) -> Result<Vec<ProtocolTranscript>> {
        match policy {
            Policy::Exhaustive => self.exhaustive(book),
            Policy::Sampled { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok(vec![self.sample(&mut rng, book)?])
            }
            Policy::Forced(outcome) => Ok(vec![self.forced(outcome, book)?]),
        }
    }

    pub fn exhaustive(&mut self, book: &mut CorrectionBook) -> Result<Vec<ProtocolTranscript>> {
        let leaves = self.sim.enumerate()?;
        leaves.into_iter().map(|leaf| self.finish(leaf, book)).collect()
    }

    /// Draws each announcement from its conditional distribution.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R, book: &mut CorrectionBook) -> Result<ProtocolTranscript> {
        let leaf = self.sim.walk(|_, probs| {
            let total: f64 = probs.iter().sum();
            let mut u = rng.random::<f64>() * total;
            let mut last_defined = 0;
            for (k, &p) in probs.iter().enumerate() {
                if p <= 0.0 {
                    continue;
                }
                last_defined = k;
                if u < p {
                    return Ok(k);
                }
                u -= p;
            }
            Ok(last_defined)
        })?;
        self.finish(leaf, book)
    }

    pub fn forced(&mut self, outcome: &Outcome, book: &mut CorrectionBook) -> Result<ProtocolTranscript> {
        let leaf = self.sim.forced(outcome)?;
        self.finish(leaf, book)
    }

    fn finish(&self, leaf: BranchLeaf, book: &mut CorrectionBook) -> Result<ProtocolTranscript> {
        if book.n_senders() != self.n_senders() {
            return Err(Error::ShareCount {
                rows: book.n_senders() - 1,
                senders: self.n_senders(),
                expected: self.n_senders() - 1,
            });
        }
        let correction = book.correction(&leaf.outcome)?;
        let final_state = parity_expand(&correction.apply(&leaf.charlie)?)?;
        let fidelity = fidelity_up_to_phase(&final_state, &self.target)?;
        let classical_bits = leaf.steps.iter().map(|s| s.bits).sum();
        Ok(ProtocolTranscript {
            n_senders: self.n_senders(),
            channel: self.sim.layout().channel_description(),
            steps: leaf.steps,
            outcome: leaf.outcome,
            probability: leaf.probability,
            classical_bits,
            pre_correction: leaf.charlie,
            correction,
            final_state,
            fidelity,
        })
    }
}

/// Two senders over three three-qubit GHZ groups.
pub fn run_two_sender(
    x: &AmplitudeProfile,
    delta: &PhaseProfile,
    policy: &Policy,
    book: &mut CorrectionBook,
) -> Result<Vec<ProtocolTranscript>> {
    Session::two_sender(x, delta)?.run(policy, book)
}

/// `n_senders` senders over three `(N+1)`-qubit GHZ groups.
pub fn run_n_sender(
    n_senders: usize,
    x: &AmplitudeProfile,
    shares: &PhaseShares,
    policy: &Policy,
    book: &mut CorrectionBook,
) -> Result<Vec<ProtocolTranscript>> {
    Session::n_sender(n_senders, x, shares)?.run(policy, book)
}

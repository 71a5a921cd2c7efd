//! Measurement tree for one protocol instance.
//!
//! Each node holds the register left after the measurements on its path.
//! Children are expanded lazily and cached, so repeated sampling of the same
//! instance only pays for measurements it has not seen yet.

use std::fmt;

use crate::bases::{compose_phases, eta_basis, g_basis, h_basis, AmplitudeProfile, PhaseProfile, PhaseShares};
use crate::error::{Error, Result};
use crate::qstate::{BasisSet, StateVector, BASIS_DIM};

use super::correction::Outcome;
use super::layout::{prepare_channel, Party, QubitLayout};

/// The phase knowledge behind the phase senders' bases.
#[derive(Clone, Debug, PartialEq)]
pub enum Phases {
    /// Two senders; the single phase holder knows all of `delta`.
    Joint(PhaseProfile),
    /// `N` senders; phase holder `l` knows share row `l`.
    Shared(PhaseShares),
}

impl Phases {
    pub fn n_senders(&self) -> usize {
        match self {
            Phases::Joint(_) => 2,
            Phases::Shared(shares) => shares.n_senders(),
        }
    }

    /// Phases of the state the senders jointly encode.
    pub fn composed(&self) -> PhaseProfile {
        match self {
            Phases::Joint(delta) => delta.clone(),
            Phases::Shared(shares) => compose_phases(shares),
        }
    }

    /// Basis for phase sender `l` after the amplitude outcome `k`.
    pub fn basis(&self, k: usize, l: usize) -> Result<BasisSet> {
        match self {
            Phases::Joint(delta) if l == 1 => g_basis(k, delta),
            Phases::Joint(_) => Err(Error::IndexOutOfRange {
                what: "phase sender",
                value: l,
            }),
            Phases::Shared(shares) => h_basis(k, l, shares),
        }
    }

    pub fn label(&self, k: usize, l: usize) -> BasisLabel {
        match self {
            Phases::Joint(_) => BasisLabel::Tau { k },
            Phases::Shared(_) => BasisLabel::TauShared { k, l },
        }
    }
}

/// Identifies which constructed basis a measurement used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisLabel {
    Eta,
    Tau { k: usize },
    TauShared { k: usize, l: usize },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Eta => write!(f, "eta"),
            BasisLabel::Tau { k } => write!(f, "tau(k={k})"),
            BasisLabel::TauShared { k, l } => write!(f, "tau(k={k},l={l})"),
        }
    }
}

/// One announced measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub party: Party,
    pub basis: BasisLabel,
    pub outcome: usize,
    /// Probability of this outcome given the earlier announcements.
    pub probability: f64,
    /// Sum of the conditional probabilities of all eight outcomes.
    pub distribution_sum: f64,
    /// Classical bits announced for this measurement.
    pub bits: u32,
}

/// Bits needed to announce one of eight outcomes.
pub const BITS_PER_ANNOUNCEMENT: u32 = BASIS_DIM.trailing_zeros();

#[derive(Clone, Debug)]
struct Register {
    state: StateVector,
    /// Layout index of each register qubit, in register order.
    labels: Vec<usize>,
}

impl Register {
    fn positions(&self, triple: [usize; 3]) -> [usize; 3] {
        triple.map(|q| {
            self.labels
                .iter()
                .position(|&l| l == q)
                .expect("party qubits are still in the register")
        })
    }

    fn measure(&self, triple: [usize; 3], basis: &BasisSet) -> Result<Vec<Child>> {
        let branches = self.state.measure_in_basis(self.positions(triple), basis)?;
        let labels: Vec<usize> = self.labels.iter().copied().filter(|l| !triple.contains(l)).collect();
        Ok(branches
            .into_iter()
            .map(|b| Child {
                probability: b.probability,
                node: b.collapsed.map(|state| {
                    Box::new(Node {
                        register: Register {
                            state,
                            labels: labels.clone(),
                        },
                        children: None,
                    })
                }),
            })
            .collect())
    }
}

#[derive(Debug)]
struct Node {
    register: Register,
    children: Option<Vec<Child>>,
}

#[derive(Debug)]
struct Child {
    probability: f64,
    node: Option<Box<Node>>,
}

/// Everything known at the end of one branch, before Charlie acts.
#[derive(Clone, Debug)]
pub struct BranchLeaf {
    pub outcome: Outcome,
    pub steps: Vec<MeasurementRecord>,
    /// Joint probability of the branch.
    pub probability: f64,
    /// Charlie's collapsed state on (C1, C2, C3), C1 most significant.
    pub charlie: StateVector,
}

/// Lazily expanded measurement tree for a fixed instance.
#[derive(Debug)]
pub struct BranchSimulator {
    layout: QubitLayout,
    phases: Phases,
    eta: BasisSet,
    /// `phase_bases[l - 1][k]`.
    phase_bases: Vec<Vec<BasisSet>>,
    root: Node,
}

impl BranchSimulator {
    pub fn new(x: &AmplitudeProfile, phases: Phases) -> Result<Self> {
        let layout = QubitLayout::new(phases.n_senders())?;
        let eta = eta_basis(x);
        let phase_bases = (1..layout.n_senders())
            .map(|l| (0..BASIS_DIM).map(|k| phases.basis(k, l)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let state = prepare_channel(&layout)?;
        let labels = (0..layout.total_qubits()).collect();
        Ok(Self {
            layout,
            phases,
            eta,
            phase_bases,
            root: Node {
                register: Register { state, labels },
                children: None,
            },
        })
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn phases(&self) -> &Phases {
        &self.phases
    }

    /// Every basis the senders may use, labelled.
    pub fn bases(&self) -> Vec<(BasisLabel, &BasisSet)> {
        let mut out = vec![(BasisLabel::Eta, &self.eta)];
        for (i, per_k) in self.phase_bases.iter().enumerate() {
            for (k, b) in per_k.iter().enumerate() {
                out.push((self.phases.label(k, i + 1), b));
            }
        }
        out
    }

    /// Replaces a basis, e.g. with a perturbed copy. Clears cached branches.
    pub fn override_basis(&mut self, label: BasisLabel, basis: BasisSet) -> Result<()> {
        match label {
            BasisLabel::Eta => self.eta = basis,
            BasisLabel::Tau { k } | BasisLabel::TauShared { k, l: 1 } if self.layout.n_senders() == 2 && k < BASIS_DIM => {
                self.phase_bases[0][k] = basis;
            }
            BasisLabel::TauShared { k, l } if l >= 1 && l < self.layout.n_senders() && k < BASIS_DIM => {
                self.phase_bases[l - 1][k] = basis;
            }
            _ => {
                return Err(Error::IndexOutOfRange {
                    what: "basis label",
                    value: 0,
                })
            }
        }
        self.root.children = None;
        Ok(())
    }

    /// Follows one path; `choose(depth, probabilities)` picks each outcome.
    pub fn walk<F>(&mut self, mut choose: F) -> Result<BranchLeaf>
    where
        F: FnMut(usize, &[f64]) -> Result<usize>,
    {
        let n = self.layout.n_senders();
        let mut digits = Vec::with_capacity(n);
        let mut steps = Vec::with_capacity(n);
        let mut probability = 1.0;
        let mut node = &mut self.root;
        for depth in 0..n {
            let party = if depth == 0 { Party::Alice } else { Party::Bob(depth) };
            let alice_k = digits.first().copied().unwrap_or(0);
            let (basis, label) = if depth == 0 {
                (&self.eta, BasisLabel::Eta)
            } else {
                (&self.phase_bases[depth - 1][alice_k], self.phases.label(alice_k, depth))
            };
            let triple = self.layout.triple(party)?;
            if node.children.is_none() {
                node.children = Some(node.register.measure(triple, basis)?);
            }
            let children = node.children.as_mut().expect("expanded above");
            let probs: Vec<f64> = children.iter().map(|c| c.probability).collect();
            let pick = choose(depth, &probs)?;
            if pick >= BASIS_DIM {
                return Err(Error::IndexOutOfRange {
                    what: "measurement outcome",
                    value: pick,
                });
            }
            digits.push(pick);
            probability *= probs[pick];
            steps.push(MeasurementRecord {
                party,
                basis: label,
                outcome: pick,
                probability: probs[pick],
                distribution_sum: probs.iter().sum(),
                bits: BITS_PER_ANNOUNCEMENT,
            });
            node = match children[pick].node.as_deref_mut() {
                Some(next) => next,
                None => return Err(Error::ZeroProbabilityBranch(digit_string(&digits))),
            };
        }
        debug_assert_eq!(
            node.register.labels,
            self.layout.triple(Party::Charlie)?.to_vec(),
            "only the receiver's qubits remain"
        );
        Ok(BranchLeaf {
            outcome: Outcome::from_digits(&digits)?,
            steps,
            probability,
            charlie: node.register.state.clone(),
        })
    }

    /// Follows the path named by `outcome`.
    pub fn forced(&mut self, outcome: &Outcome) -> Result<BranchLeaf> {
        if outcome.n_senders() != self.layout.n_senders() {
            return Err(Error::OutcomeShape {
                outcome: outcome.to_string(),
                expected: self.layout.n_senders() - 1,
                found: outcome.n_senders() - 1,
            });
        }
        let digits = outcome.digits();
        self.walk(|depth, _| Ok(digits[depth]))
    }

    /// Every branch, in outcome order. Zero-probability branches are an error.
    pub fn enumerate(&mut self) -> Result<Vec<BranchLeaf>> {
        let n = self.layout.n_senders();
        let total = 8usize.pow(n as u32);
        (0..total)
            .map(|index| self.forced(&Outcome::from_index(n, index)?))
            .collect()
    }
}

pub(crate) fn digit_string(digits: &[usize]) -> String {
    digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
}

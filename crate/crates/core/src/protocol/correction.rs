use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::bases::{AmplitudeProfile, PhaseShares};
use crate::error::{Error, Result};
use crate::qstate::{fidelity_up_to_phase, GateMatrix, StateVector, BASIS_DIM, FIDELITY_TOL};

use super::branch::{digit_string, BranchSimulator, Phases};
use super::sampling::generic_instance;
use super::target::compressed_target;

/// Largest sender count whose full outcome space is enumerated.
pub const MAX_ENUMERATED_SENDERS: usize = 3;

/// Seed of the reference profile corrections are derived from.
pub const REFERENCE_SEED: u64 = 0x6a72_7370;

/// Seed of the independent profile table entries are checked against.
pub const VERIFICATION_SEED: u64 = 0x7665_7269;

/// Joint announcement: Alice's `k` then each phase sender's `j_l`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome {
    alice: usize,
    bobs: Vec<usize>,
}

impl Outcome {
    pub fn new(alice: usize, bobs: Vec<usize>) -> Result<Self> {
        if bobs.is_empty() {
            return Err(Error::TooFewSenders(1));
        }
        for &d in std::iter::once(&alice).chain(&bobs) {
            if d >= BASIS_DIM {
                return Err(Error::IndexOutOfRange {
                    what: "outcome digit",
                    value: d,
                });
            }
        }
        Ok(Self { alice, bobs })
    }

    pub fn from_digits(digits: &[usize]) -> Result<Self> {
        match digits.split_first() {
            Some((&alice, bobs)) => Self::new(alice, bobs.to_vec()),
            None => Err(Error::TooFewSenders(0)),
        }
    }

    /// Outcome number `index` in base-8 order over `n_senders` digits.
    pub fn from_index(n_senders: usize, index: usize) -> Result<Self> {
        let mut digits = vec![0; n_senders];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = rest % BASIS_DIM;
            rest /= BASIS_DIM;
        }
        if rest != 0 {
            return Err(Error::IndexOutOfRange {
                what: "outcome index",
                value: index,
            });
        }
        Self::from_digits(&digits)
    }

    /// Every outcome for `n_senders`, in order.
    pub fn all(n_senders: usize) -> impl Iterator<Item = Outcome> {
        (0..BASIS_DIM.pow(n_senders as u32)).map(move |i| Self::from_index(n_senders, i).expect("index in range"))
    }

    pub fn alice(&self) -> usize {
        self.alice
    }

    pub fn bobs(&self) -> &[usize] {
        &self.bobs
    }

    pub fn n_senders(&self) -> usize {
        self.bobs.len() + 1
    }

    pub fn digits(&self) -> Vec<usize> {
        std::iter::once(self.alice).chain(self.bobs.iter().copied()).collect()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digit_string(&self.digits()))
    }
}

/// Parses a base-8 digit string, Alice's digit first.
impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| c.to_digit(8).map(|d| d as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::MalformedOutcome(s.to_string()))?;
        if digits.len() < 2 {
            return Err(Error::MalformedOutcome(s.to_string()));
        }
        Self::from_digits(&digits)
    }
}

/// Single-qubit correction; `ZX` applies X first, then Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Z,
    ZX,
}

impl Pauli {
    /// Oracle search order.
    pub const ORDER: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Z, Pauli::ZX];

    pub fn symbol(self) -> &'static str {
        match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Z => "Z",
            Pauli::ZX => "ZX",
        }
    }

    pub fn gate(self) -> GateMatrix {
        match self {
            Pauli::I => GateMatrix::identity(2),
            Pauli::X => GateMatrix::pauli_x(),
            Pauli::Z => GateMatrix::pauli_z(),
            Pauli::ZX => GateMatrix::pauli_z()
                .matmul(&GateMatrix::pauli_x())
                .expect("2x2 gates"),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pauli::ORDER
            .into_iter()
            .find(|p| p.symbol() == s)
            .ok_or_else(|| Error::MalformedOutcome(s.to_string()))
    }
}

/// Charlie's correction on (C1, C2, C3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorrectionTriple(pub [Pauli; 3]);

impl CorrectionTriple {
    pub const IDENTITY: CorrectionTriple = CorrectionTriple([Pauli::I; 3]);

    /// All 64 triples in search order, C1 outermost.
    pub fn search_order() -> impl Iterator<Item = CorrectionTriple> {
        Pauli::ORDER.into_iter().flat_map(|a| {
            Pauli::ORDER
                .into_iter()
                .flat_map(move |b| Pauli::ORDER.into_iter().map(move |c| CorrectionTriple([a, b, c])))
        })
    }

    pub fn apply(&self, s3: &StateVector) -> Result<StateVector> {
        if s3.n_qubits() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: s3.n_qubits(),
            });
        }
        let mut out = s3.clone();
        for (q, p) in self.0.iter().enumerate() {
            if *p != Pauli::I {
                out = out.apply_single(q, &p.gate())?;
            }
        }
        Ok(out)
    }

    pub fn symbols(&self) -> [&'static str; 3] {
        self.0.map(Pauli::symbol)
    }
}

impl fmt::Display for CorrectionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for CorrectionTriple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<Pauli> = s.split_whitespace().map(str::parse).collect::<Result<_>>()?;
        let parts: [Pauli; 3] = parts
            .try_into()
            .map_err(|_| Error::MalformedOutcome(s.to_string()))?;
        Ok(Self(parts))
    }
}

/// First triple in search order mapping `charlie` onto `compressed` with
/// fidelity at least `1 - 1e-10`.
pub fn search_correction(charlie: &StateVector, compressed: &StateVector, outcome: &Outcome) -> Result<CorrectionTriple> {
    let mut best = 0.0f64;
    for triple in CorrectionTriple::search_order() {
        let fidelity = fidelity_up_to_phase(&triple.apply(charlie)?, compressed)?;
        if fidelity >= 1.0 - FIDELITY_TOL {
            return Ok(triple);
        }
        best = best.max(fidelity);
    }
    Err(Error::NoCorrectionFound {
        outcome: outcome.to_string(),
        best_fidelity: best,
    })
}

/// Brute-force oracle: simulates the branch `outcome` for the given
/// instance and searches all 64 Pauli triples.
pub fn derive_correction(outcome: &Outcome, x: &AmplitudeProfile, phases: &Phases) -> Result<CorrectionTriple> {
    let mut sim = BranchSimulator::new(x, phases.clone())?;
    let leaf = sim.forced(outcome)?;
    search_correction(&leaf.charlie, &compressed_target(x, &phases.composed()), outcome)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableEntry {
    pub correction: CorrectionTriple,
    /// Branch fidelity on an independent profile after applying `correction`.
    pub verification_fidelity: f64,
}

/// Outcome -> correction, in outcome order.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionTable {
    n_senders: usize,
    entries: BTreeMap<Outcome, TableEntry>,
}

impl CorrectionTable {
    pub fn n_senders(&self) -> usize {
        self.n_senders
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, outcome: &Outcome) -> Option<&TableEntry> {
        self.entries.get(outcome)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Outcome, &TableEntry)> {
        self.entries.iter()
    }
}

/// Full table over all `8^N` outcomes; `N <= 3`.
pub fn build_correction_table(n_senders: usize) -> Result<CorrectionTable> {
    if n_senders > MAX_ENUMERATED_SENDERS {
        return Err(Error::EnumerationTooLarge {
            senders: n_senders,
            max: MAX_ENUMERATED_SENDERS,
        });
    }
    build_correction_table_for(n_senders, Outcome::all(n_senders))
}

/// Table over the given outcomes, each derived on the reference profile and
/// checked on an independent one.
pub fn build_correction_table_for<I>(n_senders: usize, outcomes: I) -> Result<CorrectionTable>
where
    I: IntoIterator<Item = Outcome>,
{
    let mut book = CorrectionBook::new(n_senders)?;
    let check = generic_instance(VERIFICATION_SEED, n_senders)?;
    let mut checker = BranchSimulator::new(&check.x, Phases::Shared(check.shares.clone()))?;
    let check_target = compressed_target(&check.x, &check.delta);
    let mut entries = BTreeMap::new();
    for outcome in outcomes {
        let correction = book.correction(&outcome)?;
        let leaf = checker.forced(&outcome)?;
        let verification_fidelity = fidelity_up_to_phase(&correction.apply(&leaf.charlie)?, &check_target)?;
        if verification_fidelity < 1.0 - FIDELITY_TOL {
            return Err(Error::CorrectionNotPortable {
                outcome: outcome.to_string(),
                fidelity: verification_fidelity,
            });
        }
        entries.insert(
            outcome,
            TableEntry {
                correction,
                verification_fidelity,
            },
        );
    }
    Ok(CorrectionTable { n_senders, entries })
}

/// Charlie's lookup: corrections derived on demand from a fixed generic
/// reference instance and cached.
#[derive(Debug)]
pub struct CorrectionBook {
    n_senders: usize,
    reference: BranchSimulator,
    reference_target: StateVector,
    entries: BTreeMap<Outcome, CorrectionTriple>,
}

impl CorrectionBook {
    pub fn new(n_senders: usize) -> Result<Self> {
        Self::with_seed(n_senders, REFERENCE_SEED)
    }

    pub fn with_seed(n_senders: usize, seed: u64) -> Result<Self> {
        let instance = generic_instance(seed, n_senders)?;
        Self::with_reference(&instance.x, &instance.shares)
    }

    pub fn with_reference(x: &AmplitudeProfile, shares: &PhaseShares) -> Result<Self> {
        let phases = Phases::Shared(shares.clone());
        let reference_target = compressed_target(x, &phases.composed());
        Ok(Self {
            n_senders: shares.n_senders(),
            reference: BranchSimulator::new(x, phases)?,
            reference_target,
            entries: BTreeMap::new(),
        })
    }

    pub fn n_senders(&self) -> usize {
        self.n_senders
    }

    pub fn correction(&mut self, outcome: &Outcome) -> Result<CorrectionTriple> {
        if let Some(c) = self.entries.get(outcome) {
            return Ok(*c);
        }
        let leaf = self.reference.forced(outcome)?;
        let c = search_correction(&leaf.charlie, &self.reference_target, outcome)?;
        self.entries.insert(outcome.clone(), c);
        Ok(c)
    }

    /// Fills the book for every outcome (`N <= 3`).
    pub fn fill(&mut self) -> Result<()> {
        if self.n_senders > MAX_ENUMERATED_SENDERS {
            return Err(Error::EnumerationTooLarge {
                senders: self.n_senders,
                max: MAX_ENUMERATED_SENDERS,
            });
        }
        for outcome in Outcome::all(self.n_senders) {
            self.correction(&outcome)?;
        }
        Ok(())
    }
}

//! Both joint preparation protocols, end to end.
//!
//! The amplitude holder (Alice) measures her three channel qubits in the
//! amplitude basis and announces `k`; each phase holder then measures in the
//! phase basis selected by `k` and announces `j_l`. The receiver (Charlie)
//! applies a Pauli triple looked up by the full announcement, appends an
//! ancilla and spreads the parity onto it.

mod branch;
mod correction;
mod layout;
mod runner;
pub mod sampling;
mod target;

pub use branch::{BasisLabel, BranchLeaf, BranchSimulator, MeasurementRecord, Phases, BITS_PER_ANNOUNCEMENT};
pub use correction::{
    build_correction_table, build_correction_table_for, derive_correction, search_correction, CorrectionBook,
    CorrectionTable, CorrectionTriple, Outcome, Pauli, TableEntry, MAX_ENUMERATED_SENDERS, REFERENCE_SEED,
    VERIFICATION_SEED,
};
pub use layout::{ghz, prepare_channel, Party, QubitLayout};
pub use runner::{classical_cost, run_n_sender, run_two_sender, Policy, ProtocolTranscript, Session};
pub use target::{chi_profile, chi_state, compressed_target, parity_expand, target_state, CHI_KETS};

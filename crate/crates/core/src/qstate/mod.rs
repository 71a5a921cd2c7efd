//! Dense statevector engine.
//!
//! Basis kets are labelled most-significant-first: qubit 0 is the leftmost
//! symbol in `|q_0 q_1 ... q_{n-1}>`, so ket `|0011>` on four qubits is index 3.
//! Every operation returns a new state; nothing mutates in place.

mod gate;
mod measure;
mod state;

pub use gate::GateMatrix;
pub use measure::{BasisSet, MeasurementBranch, BASIS_DIM};
pub use state::{decode_index, encode_index, fidelity_up_to_phase, phase_aligned_deviation, StateVector};

pub use num_complex::Complex64;

/// Tolerance for algebraic identities (norms, unitarity, orthonormality).
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Tolerance for end-to-end fidelities.
pub const FIDELITY_TOL: f64 = 1e-10;

/// Branches with probability below this carry no collapsed state.
pub const ZERO_PROBABILITY: f64 = 1e-14;

/// Largest register the dense engine will allocate.
pub const MAX_QUBITS: usize = 24;

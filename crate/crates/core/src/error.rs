use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit indices must be distinct, got {0:?}")]
    DuplicateQubits(Vec<usize>),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("register of {0} qubits exceeds the dense simulation limit")]
    RegisterTooLarge(usize),

    #[error("amplitude array is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("gate is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("basis is not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("amplitude profile is not normalized: sum of squares = {sum_sq}")]
    UnnormalizedProfile { sum_sq: f64 },

    #[error("leading phase must be exactly 0, got {0}")]
    NonZeroLeadingPhase(f64),

    #[error("sign-pattern argument {index} has modulus {modulus}, expected 1")]
    NonUnitModulus { index: usize, modulus: f64 },

    #[error("sign matrix rows {0} and {1} are not orthogonal")]
    NonOrthogonalSigns(usize, usize),

    #[error("{what} index {value} out of range")]
    IndexOutOfRange { what: &'static str, value: usize },

    #[error("at least two senders are required, got {0}")]
    TooFewSenders(usize),

    #[error("phase shares have {rows} rows but {senders} senders need {expected}")]
    ShareCount {
        rows: usize,
        senders: usize,
        expected: usize,
    },

    #[error("outcome {outcome} has {found} receiver-side digits, expected {expected}")]
    OutcomeShape {
        outcome: String,
        expected: usize,
        found: usize,
    },

    #[error("malformed outcome string {0:?}")]
    MalformedOutcome(String),

    #[error("branch {0} has zero probability")]
    ZeroProbabilityBranch(String),

    #[error("no Pauli correction reaches the fidelity threshold for outcome {outcome} (best {best_fidelity})")]
    NoCorrectionFound { outcome: String, best_fidelity: f64 },

    #[error("correction for outcome {outcome} fails on a fresh profile (fidelity {fidelity})")]
    CorrectionNotPortable { outcome: String, fidelity: f64 },

    #[error("full enumeration is limited to {max} senders, got {senders}")]
    EnumerationTooLarge { senders: usize, max: usize },
}

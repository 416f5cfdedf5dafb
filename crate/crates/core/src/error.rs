use thiserror::Error;

/// Errors surfaced by the emulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("gate control and target indices overlap on qubit {0}")]
    OverlappingQubit(usize),

    #[error("circuit acts on {circuit} qubits but the state has {state}")]
    RegisterMismatch { circuit: usize, state: usize },

    #[error("single-qubit matrix is not unitary (deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("dense unitary extraction limited to 12 qubits, got {0}")]
    UnitarySizeGuard(usize),

    #[error("problem size guard exceeded: {qubits} qubits requested, limit {limit}")]
    SizeGuard { qubits: usize, limit: usize },

    #[error("boundary expression singular: {0}")]
    SingularBoundary(String),

    #[error("{0} scheme invalid here: {1}")]
    InvalidScheme(&'static str, &'static str),

    #[error("ladder index {j} outside 1..={n}")]
    LadderIndex { j: usize, n: usize },

    #[error("select oracle variant mismatch: {0}")]
    VariantMismatch(&'static str),

    #[error("epsilon {0} outside the admissible range (0, 0.9027]")]
    EpsilonRange(f64),

    #[error("cannot prepare a zero vector")]
    ZeroVector,

    #[error("source term vanishes at every outer quadrature node")]
    DegenerateSource,

    #[error("post-selection probability {0:.3e} below 1e-12")]
    DegeneratePostSelection(f64),

    #[error("reference vector is zero")]
    ZeroReference,

    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("unknown experiment id {0} (valid: 1..=10)")]
    UnknownExperiment(u32),

    #[error("order {0} outside the supported range {1}")]
    OutOfRange(String, String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

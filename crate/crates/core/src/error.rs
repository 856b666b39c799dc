use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("control and target must differ (both {0})")]
    SameControlTarget(usize),

    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitCountMismatch { expected: usize, found: usize },

    #[error("too many qubits: {0}")]
    TooManyQubits(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("atoms {0} and {1} coincide")]
    CoincidentAtoms(usize, usize),

    #[error("overlap matrix is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("orbitals are not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no terms")]
    NoTerms,

    #[error("Hilbert space dimension 2^{0} too large for exact diagonalization")]
    DimensionTooLarge(usize),

    #[error("sector contains no basis states")]
    EmptySector,

    #[error("coordinate {value} outside [0, {rref}] (row {row}, atom {atom})")]
    CoordinateOutOfRange {
        row: usize,
        atom: usize,
        value: f64,
        rref: f64,
    },

    #[error("decoded row {row} violates atom ordering: {coords:?}")]
    OrderingViolation { row: usize, coords: Vec<f64> },

    #[error("parameter length mismatch: expected {expected}, found {found}")]
    ParameterLength { expected: usize, found: usize },

    #[error("degenerate tangent: neighbouring images coincide")]
    DegenerateTangent,

    #[error("empty image set")]
    NoImages,

    #[error("energy evaluation failed at geometry {geometry:?}: {source}")]
    Probe {
        geometry: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("path decode failed at theta {theta:?}: {source}")]
    Decode {
        theta: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

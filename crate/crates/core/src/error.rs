use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("register size mismatch: expected {expected} qubits, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("qubit index {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("register of {n} qubits exceeds the limit of {max}")]
    RegisterTooLarge { n: usize, max: usize },
    #[error("invalid register: {0}")]
    InvalidRegister(String),
    #[error("not a physical state: {0}")]
    NotPhysical(String),
    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryExpectation(f64),
    #[error("Pauli letter on qubit {qubit} is not measurable in the requested basis")]
    BasisIncompatible { qubit: usize },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("weights sum to {sum}, expected 1")]
    BadNormalization { sum: f64 },
    #[error("transition matrix is ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("shot count must be positive")]
    InvalidShots,
    #[error("missing result for job {0}")]
    MissingJob(usize),
    #[error("job {job}: {source}")]
    Job {
        job: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn in_job(self, job: usize) -> Self {
        Error::Job { job, source: alloc::boxed::Box::new(self) }
    }
}

use thiserror::Error;

/// Everything that can go wrong while building states or evaluating Q.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cutoff too small: {0}")]
    CutoffTooSmall(String),

    #[error("matrix exponential did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("invalid temperature: beta = {0} (must be finite and > 0)")]
    InvalidTemperature(f64),

    #[error("invalid superposition weight: r = {0} (must be finite and >= 0)")]
    InvalidWeight(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0}: Q undefined (zero mean photon number)")]
    ZeroIntensity(String),

    #[error("selected mode carries no photons (mean {0:e}); covariant Q undefined")]
    ZeroModeIntensity(f64),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("closed form for {family} has an open mismatch in the discrepancy ledger")]
    ClosedFormMismatch { family: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid density matrix: {0}")]
    Validation(#[from] ValidationError),
}

/// Which density-matrix invariant failed, with the worst offender.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("expected {expected} entries for n_max = {n_max}, found {found}")]
    Length {
        n_max: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("trace is {trace} (deficit {deficit:.3e} exceeds tolerance)")]
    Trace { trace: f64, deficit: f64 },
    #[error("not Hermitian: |rho[{row}][{col}] - conj(rho[{col}][{row}])| = {deviation:.3e}")]
    Hermiticity {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("not positive semidefinite: eigenvalue {eigenvalue:.3e} (index {index})")]
    Positivity { index: usize, eigenvalue: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

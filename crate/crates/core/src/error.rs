use thiserror::Error;

/// Failures of the weight algebra and simplex geometry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("point (x={x}, omega_n={w_zero}) lies outside the 2-simplex")]
    OutsideSimplex { x: f64, w_zero: f64 },

    #[error("{what}={value} is outside its admissible range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("charge fraction nu={nu} exceeds the reference fraction nu0={nu0}")]
    InconsistentReference { nu: f64, nu0: f64 },

    #[error("charge fraction nu={nu} lies on the opposite side of reference nu0={nu0}")]
    SignMismatch { nu: f64, nu0: f64 },

    #[error("reference fractions nu0={nu0} and nu0'={nu0_prime} lie on opposite sides")]
    SideMismatch { nu0: f64, nu0_prime: f64 },

    #[error("q mismatch between charge fraction (q={left}) and reference (q={right})")]
    ChargeMismatch { left: u32, right: u32 },

    #[error("point is closer than step h={h} to a simplex boundary")]
    BoundaryTooClose { h: f64 },
}

/// Failures when building or validating a [`DomainSpec`](crate::simplex::DomainSpec).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("{label}: maximal transfer q must be at least 1")]
    ZeroTransfer { label: String },

    #[error("{label}: cation sector has negative electron count ({n_electrons} - {q})")]
    ElectronCountUnderflow {
        label: String,
        n_electrons: u32,
        q: u32,
    },

    #[error("{label}: ionization energy I_q={i_q} must be positive")]
    NonPositiveIonization { label: String, i_q: f64 },

    #[error("{label}: {field} is not finite")]
    NonFinite { label: String, field: &'static str },
}

/// Failures of the explicit density-operator oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("sector particle counts must be strictly increasing")]
    UnorderedSectors,

    #[error("sector M={0} has zero dimension")]
    EmptySector(u32),

    #[error("no sectors in Fock space")]
    EmptySpace,

    #[error("weights sum to {0}, not 1")]
    WeightSumError(f64),

    #[error("weight {weight} for sector M={sector} is negative")]
    NegativeWeight { sector: u32, weight: f64 },

    #[error("sector M={0} is not part of the Fock space")]
    UnknownSector(u32),

    #[error("dimension mismatch: state is {state}x{state}, observable is {rows}x{cols}")]
    DimensionMismatch {
        state: usize,
        rows: usize,
        cols: usize,
    },

    #[error("density matrix not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("density matrix trace is {0}, not 1")]
    InvalidTrace(f64),

    #[error("density matrix not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("density matrix has coherence {value:e} between sectors at ({row}, {col})")]
    OffBlock { row: usize, col: usize, value: f64 },
}

/// Failures while reading or validating a species catalog.
#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("parse error{}{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default(), field.as_ref().map(|f| format!(" (field `{f}`)")).unwrap_or_default())]
    Parse {
        line: Option<u64>,
        field: Option<String>,
        message: String,
    },

    #[error("duplicate species label `{0}`")]
    DuplicateLabel(String),

    #[error("{label}: missing field `{field}` for {mode} mode")]
    MissingField {
        label: String,
        field: &'static str,
        mode: &'static str,
    },

    #[error("{label}: both absolute and descriptor energies are present")]
    ModeConflict { label: String },

    #[error(transparent)]
    Domain(#[from] DomainError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

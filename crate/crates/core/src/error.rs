use thiserror::Error;

/// Errors raised by the spectral routines.
///
/// Variants split into validation failures (bad input, see
/// [`NftError::is_validation`]) and numerical failures (the input was
/// well-formed but the computation could not produce a trustworthy value).
#[derive(Debug, Error)]
pub enum NftError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("evaluation at a pole: lambda = {re} + {im}j")]
    Pole { re: f64, im: f64 },
    #[error("degenerate spectrum: eigenvalues {0} and {1} coincide")]
    DegenerateSpectrum(usize, usize),
    #[error("two eigenvalues share the minimal imaginary part {0}")]
    DegenerateSigma(f64),
    #[error("scattering overflow at lambda = {re} + {im}j (magnitude exceeded {bound:e})")]
    Overflow { re: f64, im: f64, bound: f64 },
    #[error("division by a vanishing quantity: {0}")]
    Division(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("grid too narrow: |ln|a|^2| = {edge:e} at the grid edge exceeds {tol:e}")]
    GridTooNarrow { edge: f64, tol: f64 },
    #[error("lambda = {re} + {im}j lies outside the strip |Im| < {sigma1}")]
    Strip { re: f64, im: f64, sigma1: f64 },
    #[error("eigenvalue imaginary part {im} is within 1e-6 of sigma1 = {sigma1}; branch is ambiguous")]
    BranchAmbiguity { im: f64, sigma1: f64 },
    #[error("input does not decay at the grid edges: |f| = {edge:e} > {tol:e}")]
    EdgeDecay { edge: f64, tol: f64 },
    #[error("|b(omega)| >= 1 at omega = {omega}")]
    Supercritical { omega: f64 },
    #[error("phase step {step} exceeds pi/2 between samples {index} and {next}", next = index + 1)]
    PhaseJump { index: usize, step: f64 },
    #[error("ill-posed fit: {0}")]
    IllPosed(String),
    #[error("lambda = {re} + {im}j is not in the open upper half-plane")]
    HalfPlane { re: f64, im: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

impl NftError {
    /// True for errors caused by malformed or out-of-domain input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            NftError::InvalidInput(_)
                | NftError::DegenerateSpectrum(..)
                | NftError::DegenerateSigma(_)
                | NftError::Strip { .. }
                | NftError::HalfPlane { .. }
                | NftError::GridMismatch(_)
                | NftError::Parse(_)
                | NftError::IllPosed(_)
                | NftError::Io(_)
        )
    }
}

impl From<serde_json::Error> for NftError {
    fn from(e: serde_json::Error) -> Self {
        NftError::Parse(e.to_string())
    }
}

impl From<csv::Error> for NftError {
    fn from(e: csv::Error) -> Self {
        NftError::Parse(e.to_string())
    }
}

impl From<toml::de::Error> for NftError {
    fn from(e: toml::de::Error) -> Self {
        NftError::Parse(e.to_string())
    }
}

pub type Result<T, E = NftError> = std::result::Result<T, E>;

//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A domain type was constructed with values that break its invariants.
    InvalidInput(String),
    /// Two quantities that must share a grid were sampled on different grids.
    GridMismatch,
    /// Two states or records with different electron numbers were combined.
    ElectronCountMismatch { left: u32, right: u32 },
    /// Distance records with different conventions were mixed in one fit.
    ConventionMismatch,
    /// An iterative eigensolve hit its iteration cap before reaching the
    /// requested residual.
    NonConvergence { iterations: usize, residual: f64 },
    /// The antisymmetric pair basis would exceed the configured budget.
    PairBasisTooLarge { needed: usize, budget: usize },
    /// A tridiagonal linear solve broke down during time propagation.
    LinearSolveFailed { step: usize },
    /// A through-origin fit was requested for records with no spread in the
    /// wavefunction distance.
    DegenerateSlope,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::GridMismatch => write!(f, "operands are sampled on different grids"),
            Error::ElectronCountMismatch { left, right } => {
                write!(f, "electron number mismatch: {left} vs {right}")
            }
            Error::ConventionMismatch => {
                write!(f, "distance records use mixed metric conventions")
            }
            Error::NonConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "eigensolver did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::PairBasisTooLarge { needed, budget } => write!(
                f,
                "antisymmetric pair basis needs {needed} states, budget is {budget}"
            ),
            Error::LinearSolveFailed { step } => {
                write!(f, "tridiagonal solve broke down at propagation step {step}")
            }
            Error::DegenerateSlope => {
                write!(
                    f,
                    "slope through origin undefined: all wavefunction distances are zero"
                )
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

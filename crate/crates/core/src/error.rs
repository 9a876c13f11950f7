use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Grid dimension or resolution out of the supported range.
    InvalidGrid { dim: usize, level: u32 },
    /// Sample or coefficient buffer does not match the grid.
    LengthMismatch { expected: usize, found: usize },
    /// A sample or parameter is NaN or infinite.
    NonFinite { what: &'static str },
    /// A real-valued result was requested from a non-Hermitian tensor.
    SymmetryViolation { index: alloc::vec::Vec<i64>, defect: f64 },
    /// The requested dyadic block or packet lies beyond the grid band.
    ResolutionExhausted { requested: u32, available: u32 },
    /// Fractional derivative requested on a nonzero `n_j = 0` coefficient.
    UndefinedFractionalDerivative { axis: usize },
    /// Dimension of a parameter vector disagrees with the grid.
    DimensionMismatch { expected: usize, found: usize },
    /// Parameter outside its admissible range.
    InvalidParameter { name: &'static str, reason: String },
    /// `b_j <= 1/theta`: the Lipschitz space reduces to `{0}`.
    TrivialSpace { axis: usize },
    /// A hypothesis of the computed quantity (e.g. `alpha_j > r_j`) fails.
    HypothesisViolation { clause: String },
    /// Not enough dyadic levels on the grid for the requested fit.
    InsufficientResolution { levels: usize, needed: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGrid { dim, level } => {
                write!(f, "invalid grid: dimension {dim}, resolution exponent {level}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "buffer length {found} does not match grid size {expected}")
            }
            Error::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Error::SymmetryViolation { index, defect } => write!(
                f,
                "coefficient tensor is not Hermitian at {index:?} (defect {defect:e})"
            ),
            Error::ResolutionExhausted { requested, available } => write!(
                f,
                "dyadic level {requested} exceeds the grid band (max {available})"
            ),
            Error::UndefinedFractionalDerivative { axis } => write!(
                f,
                "fractional derivative undefined: nonzero coefficient with n_{axis} = 0"
            ),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected a vector of length {expected}, got {found}")
            }
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::TrivialSpace { axis } => write!(
                f,
                "b_{axis} <= 1/theta: the Lipschitz space is trivial"
            ),
            Error::HypothesisViolation { clause } => write!(f, "hypothesis violated: {clause}"),
            Error::InsufficientResolution { levels, needed } => write!(
                f,
                "only {levels} dyadic levels available, need at least {needed}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

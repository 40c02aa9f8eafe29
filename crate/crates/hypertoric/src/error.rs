use thiserror::Error;

/// Failures raised by the library. Validation problems carry enough context
/// for the CLI to point at the offending input field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cokernel of beta is infinite: rank of beta is {rank}, rank of N is {expected}")]
    InfiniteCokernel { rank: usize, expected: usize },
    #[error("column {index} of beta is a torsion element")]
    TorsionColumn { index: usize },
    #[error("theta is not in the image of the Gale dual")]
    NotInImage,
    #[error("theta is not generic")]
    NonGeneric,
    #[error("psi does not lift theta: expected {expected:?}, got {found:?}")]
    PsiMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error(
        "dimension too large for exact enumeration (d = {d}, m = {m}; limits d <= 6, m <= 16)"
    )]
    DimensionTooLarge { d: usize, m: usize },
    #[error("circuit {support:?} has an ambiguous orientation")]
    AmbiguousSplit { support: Vec<usize> },
    #[error("lattice point {point:?} lies outside the fan support")]
    OutsideSupport { point: Vec<String> },
    #[error("sector polynomial contains the vanishing monomial {monomial}")]
    UnreducedInput { monomial: String },
    #[error("vanishing Euler factor at fixed point {point}")]
    ZeroEuler { point: usize },
    #[error("truncation order must be at least 1")]
    TruncationTooSmall,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the library. Each variant names the violated precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("value {0} is not an element of the field")]
    NotInField(u64),
    #[error("modulus {0:#b} is not irreducible of the requested degree")]
    ReducibleModulus(u64),
    #[error("unsupported field degree {0}")]
    UnsupportedDegree(u32),
    #[error("no embedding from GF(2^{from}) into GF(2^{to})")]
    NoEmbedding { from: u32, to: u32 },
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("operation needs a non-constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial is not separable")]
    Inseparable,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} must be odd")]
    EvenDimension(usize),
    #[error("dimension {0} must be even")]
    OddDimension(usize),
    #[error("matrix is not alternating")]
    NotAlternating,
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("the two forms are proportional")]
    ProportionalPair,
    #[error("pencil is not regular")]
    NotRegular,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("binary form has {found} roots over the extension, {needed} needed")]
    NotSplit { found: usize, needed: usize },
    #[error("every rational point is a root; extension of degree {min_extension_degree} has a non-root")]
    NoRationalNonRoot { min_extension_degree: u32 },
    #[error("leading coefficient a_n vanishes")]
    AnZero,
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("class is nontrivial over this field; try an extension of degree {extension_degree}")]
    NotQuasiSplit { extension_degree: u32 },
    #[error("scan of {points} points exceeds the limit")]
    ScanTooLarge { points: u128 },
    #[error("canonical plane needs m >= 2, got m = {0}")]
    PlaneNeedsLargerM(usize),
    #[error("generator indexing could not be derived from the orbit")]
    IndexingNotDerivable,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Constructor and parse errors, as opposed to violated preconditions of an operation.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::NotInField(_)
                | Error::ReducibleModulus(_)
                | Error::UnsupportedDegree(_)
                | Error::EvenDimension(_)
                | Error::NotAlternating
                | Error::ProportionalPair
                | Error::DimensionMismatch { .. }
                | Error::InvalidInput(_)
        )
    }

    /// Short machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::FieldMismatch => "field_mismatch",
            Error::NotInField(_) => "not_in_field",
            Error::ReducibleModulus(_) => "reducible_modulus",
            Error::UnsupportedDegree(_) => "unsupported_degree",
            Error::NoEmbedding { .. } => "no_embedding",
            Error::BothZero => "both_zero",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::ConstantPolynomial => "constant_polynomial",
            Error::Inseparable => "inseparable",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::EvenDimension(_) => "even_dimension",
            Error::OddDimension(_) => "odd_dimension",
            Error::NotAlternating => "not_alternating",
            Error::DependentVectors => "dependent_vectors",
            Error::ProportionalPair => "proportional_pair",
            Error::NotRegular => "not_regular",
            Error::SingularMatrix => "singular_matrix",
            Error::NotSplit { .. } => "not_split",
            Error::NoRationalNonRoot { .. } => "no_rational_non_root",
            Error::AnZero => "an_zero",
            Error::MixedAlgebras => "mixed_algebras",
            Error::NotQuasiSplit { .. } => "not_quasi_split",
            Error::ScanTooLarge { .. } => "scan_too_large",
            Error::PlaneNeedsLargerM(_) => "plane_needs_larger_m",
            Error::IndexingNotDerivable => "indexing_not_derivable",
            Error::InvalidInput(_) => "invalid_input",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

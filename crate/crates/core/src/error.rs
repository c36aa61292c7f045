use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The enclosures could not separate a nonzero formal real from zero.
    /// The caller must supply tighter enclosures.
    #[error("indeterminate sign after {depth} refinements")]
    IndeterminateSign { depth: u32 },

    #[error("cone is not strongly convex (its span contains a line)")]
    NotStronglyConvex,

    #[error("ray {0:?} lies outside the support of the fan")]
    RayOutsideSupport(Vec<i64>),

    #[error("point lies outside the support of the fan")]
    OutsideSupport,

    #[error("cone is not a member of the ambient fan")]
    ConeNotInFan,

    #[error("the first cone is not a face of the second")]
    NotAFacePair,

    #[error("functional is not nonnegative on the cone")]
    InvalidFunctional,

    #[error("subgroup is not convex in the value group")]
    NotConvex,

    #[error("restriction is not a valuation on the given ring: {0}")]
    ConditionFails(String),

    #[error("appended level {0} has zero residual on the residue lattice")]
    LevelsNotOnResidueLattice(usize),

    #[error("valuation has no center on the fan")]
    NoCenter,

    #[error("source and target supports are incompatible with the monomial map")]
    SupportMismatch,

    #[error("uniformizer pairs to {0} with the ray generator, expected 1")]
    InvalidUniformizer(String),

    #[error("factor does not split over the base field: {0}")]
    UnsplitFactor(String),

    #[error("sublattice has infinite index")]
    InfiniteIndex,

    #[error("unsupported symbol entry: {0}")]
    UnsupportedEntry(String),

    #[error("d^{0} followed by d^{1} is not zero")]
    DifferentialNotSquareZero(usize, usize),

    #[error("Gersten top cokernel {gersten} differs from Chow oracle {oracle}")]
    Mismatch { gersten: usize, oracle: usize },

    #[error("fan is not complete")]
    NotComplete,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IndeterminateSign { .. } => "IndeterminateSign",
            Error::NotStronglyConvex => "NotStronglyConvex",
            Error::RayOutsideSupport(_) => "RayOutsideSupport",
            Error::OutsideSupport => "OutsideSupport",
            Error::ConeNotInFan => "ConeNotInFan",
            Error::NotAFacePair => "NotAFacePair",
            Error::InvalidFunctional => "InvalidFunctional",
            Error::NotConvex => "NotConvex",
            Error::ConditionFails(_) => "ConditionFails",
            Error::LevelsNotOnResidueLattice(_) => "LevelsNotOnResidueLattice",
            Error::NoCenter => "NoCenter",
            Error::SupportMismatch => "SupportMismatch",
            Error::InvalidUniformizer(_) => "InvalidUniformizer",
            Error::UnsplitFactor(_) => "UnsplitFactor",
            Error::InfiniteIndex => "InfiniteIndex",
            Error::UnsupportedEntry(_) => "UnsupportedEntry",
            Error::DifferentialNotSquareZero(..) => "DifferentialNotSquareZero",
            Error::Mismatch { .. } => "Mismatch",
            Error::NotComplete => "NotComplete",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// Whether the error reports a failed mathematical check rather than bad input.
    pub fn is_property_violation(&self) -> bool {
        matches!(self, Error::DifferentialNotSquareZero(..) | Error::Mismatch { .. })
    }
}

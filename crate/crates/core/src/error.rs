use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit-code contract:
/// `InvalidSpec` is a malformed input object, the remaining construction
/// errors signal that an operation's precondition failed or a finite scan
/// was inconclusive.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("ideal is not tall")]
    NotTall,

    #[error("not found within scan limit {0}")]
    NotFound(u64),

    #[error("set is not infinite")]
    NotInfinite,

    #[error("insufficient horizon: {0}")]
    InsufficientHorizon(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("inconsistent declaration: {0}")]
    InconsistentDeclaration(String),

    #[error("kappa scan inconclusive: {0}")]
    KappaScanInconclusive(String),

    #[error("selection failed: {0}")]
    SelectionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable tag, used in CLI error documents.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::NotApplicable(_) => "NotApplicable",
            Error::NotTall => "NotTall",
            Error::NotFound(_) => "NotFound",
            Error::NotInfinite => "NotInfinite",
            Error::InsufficientHorizon(_) => "InsufficientHorizon",
            Error::DomainError(_) => "DomainError",
            Error::InconsistentDeclaration(_) => "InconsistentDeclaration",
            Error::KappaScanInconclusive(_) => "KappaScanInconclusive",
            Error::SelectionFailed(_) => "SelectionFailed",
        }
    }
}

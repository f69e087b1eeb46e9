use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("unknown site label `{0}`")]
    UnknownSite(String),
    #[error("site `{0}` used twice where two distinct sites are required")]
    SameSite(String),
    #[error("duplicate site label `{0}`")]
    DuplicateLabel(String),
    #[error("register must have 1 to {max} sites, got {got}")]
    SiteCount { got: usize, max: usize },
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("malformed serialized data: {0}")]
    Malformed(String),
}

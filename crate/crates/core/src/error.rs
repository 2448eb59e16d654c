use thiserror::Error;

/// Errors raised by the exact layer and by the dynamical constructions built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("endpoint root: {0} vanishes at an interval endpoint")]
    EndpointRoot(String),
    #[error("no expanding root: {0} has no real root greater than 1")]
    NoExpandingRoot(String),
    #[error("sign undecided after {0} bisections")]
    Undecided(usize),
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("modality/growth mismatch: floor(lambda) = {floor} but m = {m}")]
    ModalityMismatch { m: u32, floor: String },
    #[error("not PCP-boundary: orbit of 1 never reaches 0 or 1 within {0} steps")]
    NotPcpBoundary(usize),
    #[error("not in PA(m): {0}")]
    NotInFamily(String),
    #[error("out of scope: unimodal regime")]
    UnimodalRegime,
    #[error("not reciprocal: {0}")]
    NotReciprocal(String),
    #[error("reducible matrix; recurrent blocks {0:?}")]
    ReducibleMatrix(Vec<Vec<usize>>),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the builders and verifiers in this crate.
///
/// Verification *failures* (a complex that is not a sphere, a graph that is
/// not 3-connected) are reported through the various report structs; the
/// variants here are reserved for invalid input and for broken structural
/// assertions that would invalidate every downstream result.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("operation requires k = 2, got k = {0}")]
    RequiresK2(usize),

    #[error("{0} is not a vertex of the graph")]
    UnknownVertex(String),

    #[error("poset map is inconsistent on face {face}: {detail}")]
    InconsistentPosetMap { face: String, detail: String },

    #[error("matching is invalid: {0}")]
    InvalidMatching(String),

    #[error("critical cells do not form a subcomplex: {0}")]
    NotASubcomplex(String),

    #[error("collapse failed: {0}")]
    CollapseFailed(String),

    #[error("construction lemma violated: {0}")]
    LemmaViolation(String),

    #[error("realization failed: {0}")]
    Realization(String),

    #[error("complexes disagree: {0}")]
    Mismatch(String),

    #[error("export failed: {0}")]
    Export(String),
}

pub type Result<T> = std::result::Result<T, Error>;

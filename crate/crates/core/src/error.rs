use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcError {
    #[error("singular point: gradient of the defining function vanishes")]
    SingularPoint,
    #[error("point is off the surface (|F(p) - 1| = {0:e})")]
    OffSurface(f64),
    #[error("retraction did not converge")]
    RetractionFailed,
    #[error("sampling exhausted after {attempts} draws")]
    SamplingExhausted { attempts: usize },
    #[error("not a codimension-3 distribution (H has dimension {0})")]
    NotCodimensionThree(usize),
    #[error("Gram matrix of the restricted differentials is not definite (eigenvalues {0:?})")]
    IndefiniteGram([f64; 3]),
    #[error("triple is not positively oriented")]
    OrientationMismatch,
    #[error("forms degenerate on complement")]
    DegenerateComplement,
    #[error("adapted complement system is singular")]
    SingularShift,
    #[error("joint Casimir eigenspaces did not resolve: {0}")]
    UnresolvedSpectrum(String),
    #[error("gamma check requires the adapted complement")]
    NotAdapted,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cache decode error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, QcError>;

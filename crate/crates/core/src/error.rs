use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph at vertex {vertex}: {reason}")]
    InvalidGraph { vertex: usize, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("random regular generation gave up after {attempts} restarts (n={n}, k={k})")]
    GenerationFailed { n: usize, k: usize, attempts: usize },

    #[error("graph with {n} vertices exceeds the dense-matrix limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("sampler produced {value} at step {step}, outside [0, {bound}]")]
    SampleOutOfRange { step: usize, value: f64, bound: f64 },

    #[error("sampler conditional mean {observed} at step {step} exceeds the declared bound {declared}")]
    DeclarationViolated {
        step: usize,
        observed: f64,
        declared: f64,
    },

    #[error("trial {trial} of point {point} failed: {source}")]
    TrialFailed {
        point: usize,
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

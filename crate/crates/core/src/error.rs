use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("pattern of length {pattern} is longer than the permutation of length {len}")]
    PatternTooLong { pattern: usize, len: usize },

    #[error("refusing to enumerate S_{n}: guard is n <= {guard}")]
    EnumerationGuard { n: usize, guard: usize },

    #[error("position {index} needs layer {layer}, but only {d} layers are allowed")]
    TooManyLayers { index: usize, layer: usize, d: usize },

    #[error("invalid words: {0}")]
    InvalidWords(String),

    #[error("words are not in Omega_n: letter {letter} occurs {in_a} times in a and {in_b} times in b")]
    NotInOmega { letter: usize, in_a: usize, in_b: usize },

    #[error("lattice point has nonzero coordinate sum {0}")]
    NonZeroSum(i64),

    #[error("path does not return to the origin")]
    NotABridge,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("malformed window: {0}")]
    MalformedWindow(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("bridge DP refused: about {estimate} states for n={n}, d={d} exceeds the limit {limit}")]
    StateSpaceGuard { n: usize, d: usize, estimate: u128, limit: u128 },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("sparse classes: smallest expected count {expected:.3} is below 5; draw at least {required} samples")]
    SparseClasses { expected: f64, required: u64 },

    #[error("insufficient replicas: the KS threshold at N={replicas} is {threshold:.3}; use at least {required}")]
    InsufficientReplicas { replicas: usize, threshold: f64, required: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

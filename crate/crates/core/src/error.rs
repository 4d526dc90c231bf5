use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChaosError {
    #[error("shape mismatch: left is (dim {left_dim}, order {left_order}), right is (dim {right_dim}, order {right_order})")]
    ShapeMismatch {
        left_dim: usize,
        left_order: usize,
        right_dim: usize,
        right_order: usize,
    },

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("contraction of {slots} slots exceeds min order {max}")]
    ContractionOutOfRange { slots: usize, max: usize },

    #[error("order {order} exceeds configured cap {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("divergence needs at least one free slot")]
    NoFreeSlot,

    #[error("sample has {got} coordinates, expansion has dim {expected}")]
    SampleLength { expected: usize, got: usize },

    #[error("invalid multi-index {index:?}: {reason}")]
    InvalidIndex { index: Vec<usize>, reason: String },

    #[error("non-finite coefficient {0}")]
    NonFinite(f64),

    #[error("invalid dimension {0}: must be positive")]
    ZeroDim(usize),

    #[error("iterated Ito sums are limited to order 4, got {0}")]
    IteratedOrder(usize),

    #[error("Monte Carlo check needs at least one path")]
    ZeroPaths,

    #[error("degenerate (zero) kernel")]
    DegenerateKernel,

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = ChaosError> = std::result::Result<T, E>;

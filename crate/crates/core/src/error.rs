use thiserror::Error;

use crate::count::PointInventory;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot factor zero")]
    ZeroInput,

    #[error("factorization incomplete: composite cofactor {cofactor} survived the effort budget")]
    FactorizationIncomplete { cofactor: String },

    #[error("effort budget exceeded: {0}")]
    EffortExceeded(String),

    #[error("enumeration stopped at B = {}; partial inventory attached", .0.bound)]
    EnumerationIncomplete(Box<PointInventory>),

    #[error("singular curve (discriminant is zero)")]
    SingularCurve,

    #[error("model is not integral")]
    NotIntegral,

    #[error("point is not on the curve")]
    PointNotOnCurve,

    #[error("Gram matrix is not positive definite at the requested tolerance")]
    GramNotPositiveDefinite,

    #[error("tolerance too coarse: lattice count lies in [{lower}, {upper}]")]
    ToleranceTooCoarse { lower: u64, upper: u64 },

    #[error("curve has no rational 2-torsion point")]
    NoTwoTorsion,

    #[error("height bound too small: {0}")]
    BTooSmall(String),

    #[error("rank {rank} exceeds small-rank threshold {threshold}")]
    RankTooLarge { rank: u64, threshold: u64 },

    #[error("rank {rank} is below the large-rank floor {floor}")]
    RankTooSmall { rank: u64, floor: u64 },

    #[error("empty maximization domain: {0}")]
    EmptyDomain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("registry error: {0}")]
    Registry(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Everything that can go wrong in the chain calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rotation order must be at least 2, got {0}")]
    InvalidParams(i64),
    #[error("points lie in the same rotation orbit")]
    SameOrbit,
    #[error("tuples have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("arc constraints have empty intersection")]
    EmptyArc,
    #[error("chain mixes simplices of different dimensions")]
    MixedDimension,
    #[error("vertex set {0:?} is not contained in the support")]
    NotInSupport(Vec<u32>),
    #[error("level {0:?} has points in a common orbit")]
    DependentLevel(Vec<u32>),
    #[error("levels {0:?} and {1:?} have different types")]
    IncompatibleLevels(Vec<u32>, Vec<u32>),
    #[error("level {0:?} is missing or has the wrong arity")]
    MissingLevel(Vec<u32>),
    #[error("simplices disagree on their common face {0:?}")]
    FaceMismatch(Vec<u32>),
    #[error("distance specification is inconsistent")]
    InconsistentSpec,
    #[error("not a valid crossing site: {0}")]
    InvalidSite(String),
    #[error("vertex {0} does not vanish from the boundary of the subchain")]
    NotVanishing(u32),
    #[error("vertex {0} is already in use")]
    VertexInUse(u32),
    #[error("boundary is not a 1-shell")]
    NotOneShellBoundary,
    #[error("no chain-walk joins the requested boundary faces")]
    WalkNotFound,
    #[error("section does not satisfy the reduction hypothesis")]
    HypothesisFails,
    #[error("chain is not of renameable type")]
    NotRN,
    #[error("chain is not minimal")]
    NotMinimal,
    #[error("exploration budget of {0} states exhausted")]
    BudgetExhausted(usize),
    #[error("walk is not centered at vertex {0}")]
    NotCentered(u32),
    #[error("target {target} outside [{lo}, {hi}]")]
    OutOfRange { target: i64, lo: i64, hi: i64 },
    #[error("walk of {0} steps is too long for rotation order {1}")]
    TooLong(usize, i64),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("not a subchain")]
    NotSubchain,
    #[error("reduction failed: {0}")]
    Reduction(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported type: {0}")]
    UnsupportedType(String),
    #[error("weights belong to different data (lengths {0} and {1})")]
    MixedDatum(usize, usize),
    #[error("datum is not affine")]
    NotAffine,
    #[error("lattice is not a sublattice")]
    NotSublattice,
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("rank {rank} too large (max {max})")]
    RankTooLarge { rank: usize, max: usize },
    #[error("weyl group exceeds element cap {0}")]
    WeylCapExceeded(usize),
    #[error("alcove folding did not terminate after {0} reflections")]
    NonTermination(u64),
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: u128, cap: u128 },
    #[error("negative multiplicity while peeling weight {0}")]
    NegativeMultiplicity(String),
    #[error("no builtin automorphism for {0}")]
    NoBuiltinAutomorphism(String),
    #[error("unrecognized folded type: {0}")]
    UnrecognizedFoldedType(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("weight {0} is not dominant of level {1}")]
    NotDominant(String, i64),
    #[error("verlinde sum {value} is not an integer (residual {residual:e})")]
    NotInteger { value: f64, residual: f64 },
    #[error("negative fusion coefficient {0}")]
    NegativeCoefficient(i64),
    #[error("method mismatch at {triple}: {first} vs {second}")]
    MethodMismatch { triple: String, first: i64, second: i64 },
    #[error("sector rule violated: {0}")]
    SectorRule(String),
    #[error("unsupported sector pattern: {0}")]
    UnsupportedSectorPattern(String),
    #[error("unsupported automorphism order {0}")]
    UnsupportedOrder(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

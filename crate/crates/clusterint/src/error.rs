use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lowest term of the zero function is undefined")]
    ZeroInput,
    #[error("matrix is not square ({0}x{1})")]
    NonSquare(usize, usize),
    #[error("denominator vanishes at every sampled point")]
    EvaluationSingular,
    #[error("truncation order must be at least 1, got {0}")]
    BadTruncation(u32),
    #[error("bracket {0} does not vanish at the base point")]
    NotVanishing(String),
    #[error("bracket {0} is not regular at the base point")]
    NotRegular(String),
    #[error("system is dependent: the Jacobian determinant vanishes")]
    DependentSystem,
    #[error("lowest-term degree {deg_mu_low} is below half the rank {half_rank}")]
    InequalityViolated { deg_mu_low: i64, half_rank: i64 },
    #[error("functions {0} and {1} are not log-canonical")]
    NotLogCanonical(usize, usize),
    #[error("only {found} independent functions found, expected {expected}")]
    CountShortfall { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("pulled-back bracket {{z{0}, z{1}}} is not a polynomial")]
    NonPolynomialStructure(usize, usize),
    #[error("word is not the staircase reduced word of the longest element")]
    WrongWord,
    #[error("flow structure violated at k = {k}: bracket {bracket}")]
    StructureViolated { k: usize, bracket: String },
    #[error("jet order cap {cap} reached before the lowest term was determined")]
    TruncationInsufficient { cap: u32 },
    #[error("point lies on the singular locus of the inverse map")]
    SingularLocus,
    #[error("modifier {0} is not a Casimir")]
    NotCasimir(String),
    #[error("exchange matrix is not skew-symmetrizable within the search bound")]
    NotSkewSymmetrizable,
    #[error("index {0} is not mutable")]
    NotMutable(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("cover pair references undeclared label `{0}`")]
    DanglingReference(String),
    #[error("cycle detected through element `{0}`")]
    CycleDetected(String),
    #[error("poset has {0} elements, maximum supported is {max}", max = crate::poset::MAX_ELEMENTS)]
    PosetTooLarge(usize),
    #[error("subset does not belong to this poset")]
    ForeignSubset,
    #[error("operation requires a nonempty poset")]
    EmptyPoset,
    #[error("expected a co-tree")]
    NotCoTree(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("upset count exceeds cap {cap}")]
    UpsetCapExceeded { cap: usize },
    #[error("enumeration size {size} exceeds cap {cap}")]
    EnumCapExceeded { size: usize, cap: usize },
    #[error("gen-rank brute force requires |A| <= {cap}, got {size}")]
    GenRankCapExceeded { size: usize, cap: usize },
    #[error("partition enumeration requires |P| <= {cap}, got {size}")]
    PartitionCapExceeded { size: usize, cap: usize },
    #[error("valuation budget exceeded: needs {needed} valuations, budget is {budget}")]
    ValuationBudgetExceeded { needed: u128, budget: u64 },
    #[error("search node budget exceeded ({budget} nodes)")]
    SearchBudgetExceeded { budget: u64 },
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("not a bi-Heyting algebra: {0}")]
    NotBiHeyting(String),
    #[error("malformed algebra tables: {0}")]
    MalformedAlgebra(String),
    #[error("operation requires an SI algebra")]
    NotSi,
    #[error("operation requires a bi-Gödel algebra")]
    NotBiGodel,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("color of `{0}` is not an upset")]
    NonUpsetColor(String),
    #[error("valuation does not refute the formula (value is top)")]
    NotRefuting,
    #[error("formula has no refutation pattern at cap {cap}")]
    NoRefutationAtCap { cap: usize },
    #[error("no embedding of the {n}-comb into the given poset")]
    NoCombEmbedding { n: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal construction check failed: {0}")]
    ConstructionBug(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

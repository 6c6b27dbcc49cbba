//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by table loading, dissimilarity computation and weight search.
#[derive(Debug, Error)]
pub enum Error {
    #[error("schema line {line}: {message}")]
    SchemaParse { line: usize, message: String },

    #[error("csv header does not match schema: {0}")]
    HeaderMismatch(String),

    #[error("data row {row}, column {column:?}: unknown category label {label:?}")]
    UnknownLabel {
        row: usize,
        column: String,
        label: String,
    },

    #[error("data row {row}, column {column:?}: cannot parse {value:?} as a number")]
    BadNumber {
        row: usize,
        column: String,
        value: String,
    },

    #[error("data row {row}: all values missing")]
    AllMissingRow { row: usize },

    #[error("csv read error: {0}")]
    Csv(String),

    #[error("column {column:?}: {message}")]
    BadColumn { column: String, message: String },

    #[error("column {column:?}: range undefined, all values missing")]
    UndefinedRange { column: String },

    #[error("column {column:?}: only one distinct observed level, position transform has zero denominator")]
    DegenerateOrdinal { column: String },

    #[error("column {column:?}: range must be positive, got {range}")]
    NonPositiveRange { column: String, range: f64 },

    #[error("tables have different schemas: {0}")]
    SchemaMismatch(String),

    #[error("weights must be non-negative with a positive sum")]
    InvalidWeights,

    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { got: usize, expected: usize },

    #[error("objective undefined: {defined} defined correlation(s), need at least 2")]
    UndefinedObjective { defined: usize },

    #[error("linear system is singular or near-singular")]
    SingularSystem,

    #[error("analytic weight solution requires {0}")]
    AnalyticIneligible(String),

    #[error("every individual in the initial population has an undefined objective")]
    DegenerateSearch,

    #[error("k = {k} is out of range for {n_train} training units")]
    BadNeighborCount { k: usize, n_train: usize },

    #[error("unit {unit}: dissimilarity undefined against every reference unit")]
    NoDefinedNeighbor { unit: usize },

    #[error("train/test split with fraction {fraction} leaves an empty side")]
    DegenerateSplit { fraction: f64 },

    #[error("empty donor set: every unit is a recipient")]
    EmptyDonors,

    #[error("true total is zero, relative metrics undefined")]
    ZeroTruthTotal,

    #[error("{0}")]
    InvalidConfig(String),

    #[error("bad matrix file: {0}")]
    BadMatrixFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

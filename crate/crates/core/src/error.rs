use thiserror::Error;

use crate::num::NumError;

/// Errors raised while building or querying finite metric trees and tables.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("name `{0}` is used twice")]
    DuplicateName(String),
    #[error("edge {0}-{1} has non-positive length")]
    NonPositiveLength(String, String),
    #[error("edge {0}-{0} is a loop")]
    SelfLoop(String),
    #[error("edges do not form a tree: {0}")]
    NotATree(String),
    #[error("no edge joins `{0}` and `{1}`")]
    NoSuchEdge(String, String),
    #[error("offset of point `{0}` lies outside its edge")]
    OffsetOutOfRange(String),
    #[error("tree has no points")]
    Empty,
    #[error("a single-point tree has no interior")]
    NoInterior,
    #[error("malformed metric table: {0}")]
    MalformedTable(String),
    #[error("table is not 0-hyperbolic; witness ({x}, {y}, {z}, {w}) violates the four-point condition by {margin}")]
    NotHyperbolic { x: String, y: String, z: String, w: String, margin: String },
    #[error("reconstruction failed to reproduce d({0}, {1})")]
    RoundTrip(String, String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Number(#[from] NumError),
}

/// Errors from the observers'-topology routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObserverError {
    #[error("a direction needs two distinct points")]
    DegenerateDirection,
    #[error("the probed point is the base of the direction")]
    PointIsBase,
    #[error("the sequence has no terms")]
    EmptySequence,
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("basepoint must not be a boundary point")]
    BoundaryBasepoint,
    #[error("sample must contain at least two distinct points")]
    DegenerateSample,
    #[error("map is not a bijection between designated points: {0}")]
    NotBijective(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Errors from free-group words and boundary points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("rank must be at least 2 (got {0})")]
    RankTooSmall(usize),
    #[error("rank {0} exceeds the 26 available letters")]
    RankTooLarge(usize),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(char),
    #[error("letter index {0} is outside the basis")]
    LetterOutOfRange(i32),
    #[error("periodic part of a boundary point must be nonempty")]
    EmptyPeriod,
    #[error("boundary pair components agree to depth {0}")]
    DiagonalPair(usize),
    #[error("cannot parse boundary point `{0}`")]
    BoundarySyntax(String),
}

/// Errors from the Q-map and small-word machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmapError {
    #[error("translation length of the empty word is undefined")]
    EmptyWord,
    #[error("action has rank {action} but the word uses rank {word}")]
    RankMismatch { action: usize, word: usize },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Observer(#[from] ObserverError),
}

/// Errors from metric blending and length-function checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlendError {
    #[error("lambda = {0} lies outside [0, 1]")]
    LambdaOutOfRange(String),
    #[error("edge {0} has a non-positive length in one of the metrics")]
    NonPositiveLength(usize),
    #[error("length assignments have {got} entries, shape has {expected} edges")]
    LengthCount { expected: usize, got: usize },
    #[error("marking images do not freely generate: {0}")]
    NotGenerating(String),
    #[error("metrics are not compatible: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Word(#[from] WordError),
}

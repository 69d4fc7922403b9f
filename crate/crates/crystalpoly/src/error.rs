use crate::cell::Cell;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty cell set")]
    EmptyInput,
    #[error("cells are not edge-connected ({} components)", .0.len())]
    Disconnected(Vec<Vec<Cell>>),
    #[error("area must be positive")]
    ZeroArea,
    #[error("bad dimensions {width}x{height}")]
    BadDimensions { width: usize, height: usize },
    #[error("line {line} has {found} columns, expected {expected}")]
    RaggedRows { line: usize, found: usize, expected: usize },
    #[error("illegal character {ch:?} at line {line}, column {col}")]
    IllegalChar { ch: char, line: usize, col: usize },
    #[error("bad boundary: {0}")]
    BadBoundary(String),
    #[error("interior contains undetermined spaces")]
    UndeterminedInterior,
    #[error("not compressible at row {row}, column {col}: {reason}")]
    NotCompressible { row: usize, col: usize, reason: String },
    #[error("no dismantling step found ({tried} candidates examined)")]
    NoStepFound { tried: usize },
    #[error("no boundary-rooted plus admits a three-tile insertion")]
    NoRootedPlus,
    #[error("no construction for {0}")]
    UnsupportedAlpha(String),
    #[error("no rearrangement template for {0}")]
    UnsupportedResidue(String),
    #[error("n = {requested} exceeds the enumeration cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

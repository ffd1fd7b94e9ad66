use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("self-loop on generator `{0}`")]
    SelfLoop(String),
    #[error("missing `generators:` line")]
    MissingGenerators,
    #[error("bad word token `{0}`")]
    BadToken(String),
}

/// Violations of the structural invariants of a [`crate::complex::CubeComplex2`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("edge {edge} references vertex {vertex} out of range")]
    EdgeVertex { edge: usize, vertex: usize },
    #[error("edge {edge} has label {label} out of range")]
    EdgeLabel { edge: usize, label: usize },
    #[error("edge record at position {0} has mismatched id")]
    EdgeId(usize),
    #[error("square {0}: labels are equal or not adjacent in the defining graph")]
    SquareLabels(usize),
    #[error("square {0}: boundary edges do not close up")]
    SquareBoundary(usize),
    #[error("basepoint {0} out of range")]
    Basepoint(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("input complex is not locally isometric")]
    InputNotLocallyIsometric,
    #[error("complex is not a cover of the Salvetti complex")]
    NotACover,
    #[error("subgroup possibly not word-quasiconvex for this graph: cell cap {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("ledger replay diverged at step {0}")]
    ReplayMismatch(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("word is not in the finite-index subgroup K")]
    NotInK,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeparationError {
    #[error("word lies in H; nothing to separate")]
    InH,
    #[error("word lies in K - H but both factors agree: strong distinguishing fails for this element")]
    InKButEqual,
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("family rejected: {0}")]
    InvalidFamily(String),
    #[error("fit needs at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },
    #[error("complex has no vertices")]
    EmptyComplex,
    #[error("degenerate fit: all word lengths are equal")]
    DegenerateFit,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

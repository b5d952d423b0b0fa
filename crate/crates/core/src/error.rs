use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("arc multiplicity: arc {arc} appears {count} times, expected 2")]
    ArcMultiplicity { arc: u32, count: usize },
    #[error("inconsistent traversal: {0}")]
    Traversal(String),
    #[error("move not applicable: {0}")]
    BadMove(String),
    #[error("expected a knot, found {0} components")]
    NotAKnot(usize),
    #[error("diagram has no geometry")]
    NoGeometry,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("m must be nonzero")]
    MZero,
    #[error("n must be nonzero")]
    NZero,
    #[error("q must be odd")]
    QEven,
    #[error("|q| must be at least 3")]
    QSmall,
    #[error("every a_i must be nonzero (a_{0} = 0)")]
    AZero(usize),
    #[error("N must be even (got {0})")]
    NOdd(usize),
    #[error("N must be at least 2")]
    NEmpty,
    #[error("pattern is a 2-component link (p odd or mixed parity); satellite needs a knot")]
    PatternIsLink,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TangleError {
    #[error("0/0 is not a fraction")]
    Indeterminate,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BandError {
    #[error("band references missing arc {0}")]
    MissingArc(u32),
    #[error("band references missing free loop {0}")]
    MissingLoop(usize),
    #[error("band attachments are at the same location")]
    SameLocation,
    #[error("band path passes the attachment arc itself ({0}); split the path instead")]
    SelfPass(u32),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("diagram has {crossings} crossings, above the bracket cutoff {cutoff}")]
    TooLarge { crossings: usize, cutoff: usize },
    #[error("expected a knot, found {0} components")]
    NotAKnot(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alpha must lie strictly inside (1, 2), got {0}")]
    InvalidAlpha(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid offspring law: {0}")]
    InvalidLaw(String),
    #[error("invalid tree encoding: {0}")]
    InvalidTree(String),
    #[error("invalid Lukasiewicz path: {0}")]
    InvalidPath(String),
    #[error("no tree of size {n} has positive probability under this offspring law")]
    Unattainable { n: usize },
    #[error("gave up after {cap} attempts; try a smaller size")]
    RetryCapExceeded { cap: u64 },
    #[error("chords ({0}, {1}) and ({2}, {3}) cross")]
    CrossingChords(usize, usize, usize, usize),
    #[error("invalid dissection: {0}")]
    InvalidDissection(String),
    #[error("tree vertex {0} has exactly one child")]
    UnaryVertex(usize),
    #[error("graph is disconnected: vertex {0} is unreachable")]
    Disconnected(usize),
    #[error("pairs do not form a correspondence; uncovered points: left {left:?}, right {right:?}")]
    NotACorrespondence { left: Vec<usize>, right: Vec<usize> },
    #[error("empty fitting window [{0}, {1}]")]
    EmptyWindow(f64, f64),
    #[error("bracket [{lo}, {hi}] does not straddle a sign change")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

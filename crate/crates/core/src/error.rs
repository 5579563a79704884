use thiserror::Error;

use crate::gauss::{Label, PointId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("generator s({p},{q}) is invalid on {n} strands (need 1 <= p < q <= n)")]
    BadGenerator { p: usize, q: usize, n: usize },
    #[error("letter on {found} strands in a word on {expected} strands")]
    MixedStrandCount { expected: usize, found: usize },
    #[error("missing `n=<int>` header")]
    MissingHeader,
    #[error("unrecognized token `{0}`")]
    BadToken(String),
    #[error("relation does not match the word: {0}")]
    RelationMismatch(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("point {0} occurs more than once on the circles")]
    DuplicatePoint(PointId),
    #[error("point {0} is labeled but lies on no circle")]
    UnplacedPoint(PointId),
    #[error("point {0} lies on a circle but has no label")]
    UnlabeledPoint(PointId),
    #[error("singular set {0} has fewer than two points")]
    SingletonSet(Label),
    #[error("singular set {0} has no oriented cyclic order")]
    MissingOrder(Label),
    #[error("order given for unknown singular set {0}")]
    UnknownSet(Label),
    #[error("incomplete order on singular set {0}")]
    IncompleteOrder(Label),
    #[error("order on singular set {label} mentions point {point} from outside the set")]
    ForeignEndpoint { label: Label, point: PointId },
    #[error("endpoint of point {point} repeated in order on singular set {label}")]
    DuplicateEndpoint { label: Label, point: PointId },
    #[error("order on singular set {0} violates the antipodal property")]
    AntipodalViolation(Label),
    #[error("bad order: {0}")]
    BadOrder(String),
    #[error("malformed diagram file: {0}")]
    Format(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("move is not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("orbit search exceeded the budget of {0} diagrams")]
    BudgetExceeded(usize),
    #[error("input is not a doodle: singular set {0} has more than two points")]
    NotDoodle(Label),
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeakError {
    #[error("not a peak sequence: {0}")]
    NotAPeak(String),
    #[error("step {index}: {source}")]
    Replay { index: usize, source: MoveError },
    #[error("step {0} does not produce its recorded diagram")]
    KeyMismatch(usize),
    #[error("diagram {0} of the sequence is not realizable")]
    Unrealizable(usize),
    #[error("could not connect flattened diagrams {0} and {1}")]
    Disconnected(usize, usize),
    #[error("endpoints have different minimal forms")]
    Unconfluent,
    #[error(transparent)]
    Search(#[from] SearchError),
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different variable universes")]
    UniverseMismatch,
    #[error("derivative rules for parameter `{0}` do not terminate (depth cap {1})")]
    RuleCycle(String, usize),
    #[error("order of the zero polynomial is undefined")]
    UndefinedOrder,
    #[error("direction {0} out of range for base dimension {1}")]
    Direction(usize, usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("filtration error: symbol degree {requested} below operator order {actual}")]
    Filtration { requested: usize, actual: usize },
    #[error("Groebner budget exceeded: {0}")]
    Budget(String),
    #[error("first syzygy not found within order {order} and coefficient degree {degree}")]
    SyzygyNotFound { order: usize, degree: usize },
    #[error("symbol of equation {0} vanishes at the chosen point; try another seed")]
    DegeneratePoint(usize),
    #[error("Hilbert function did not stabilize within cap {0}; increase the cap")]
    NoStabilization(usize),
    #[error("parameter range violation: {0}")]
    Range(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

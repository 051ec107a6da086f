use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("endpoint {0} outside [0, 1]")]
    EndpointOutOfRange(Box<Rational>),

    #[error("reversed interval [{0}, {1})")]
    ReversedInterval(Box<Rational>, Box<Rational>),

    #[error("word {word:?} has length {got}, window needs {expected}")]
    WordLength { word: String, expected: usize, got: usize },

    #[error("symbol {0:?} not in the alphabet")]
    BadSymbol(char),

    #[error("invalid probability vector: {0}")]
    InvalidProbs(String),

    #[error("carrier mismatch: {0} vs {1}")]
    CarrierMismatch(String, String),

    #[error("measures differ: {0} vs {1}")]
    MeasureMismatch(Box<Rational>, Box<Rational>),

    #[error("not a partition: {0}")]
    NotPartition(String),

    #[error("tuple lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid interval exchange: {0}")]
    InvalidIet(String),

    #[error("invalid finite algebra: {0}")]
    InvalidAlgebra(String),

    #[error("symbolic map has {nodes} nodes, depth budget is {budget}")]
    DepthExceeded { nodes: usize, budget: usize },

    #[error("map cannot be reduced to a finite interval exchange: {0}")]
    Irreducible(String),

    #[error("transformation has a periodic part: {0}")]
    PeriodicPart(String),

    #[error("not attainable: {0}")]
    Unattainable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("grid must be 1/q for a positive integer q, got {0}")]
    InvalidGrid(Box<Rational>),

    #[error("algebra is not compatible with the transformation: {0}")]
    NotCompatible(String),

    #[error("cycle periods differ: {0} vs {1}")]
    PeriodMismatch(usize, usize),

    #[error("quantifier-free types differ at {combination}: {left} vs {right}")]
    QfTypeMismatch {
        combination: String,
        left: Box<Rational>,
        right: Box<Rational>,
    },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

impl Error {
    /// Errors that come from running out of a configured budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::DepthExceeded { .. } | Error::BudgetExceeded(_))
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

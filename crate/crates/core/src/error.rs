use std::fmt;

use thiserror::Error;

use crate::exact::Scalar;

/// Which polytope a degeneracy witness was found in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolytopeRole {
    P,
    Q,
    Labeled,
}

impl fmt::Display for PolytopeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytopeRole::P => f.write_str("P"),
            PolytopeRole::Q => f.write_str("Q"),
            PolytopeRole::Labeled => f.write_str("Z"),
        }
    }
}

/// A point with more binding inequalities than the dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyReport {
    pub polytope: PolytopeRole,
    pub coords: Vec<Scalar>,
    /// Inequality indices binding at `coords`.
    pub binding: Vec<usize>,
    /// Labels of the binding inequalities, with multiplicity.
    pub labels: Vec<usize>,
}

impl fmt::Display for DegeneracyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "point (")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ") of {} has {} labels {:?}", self.polytope, self.labels.len(), self.labels)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("degenerate input: {0}")]
    Degenerate(Box<DegeneracyReport>),

    #[error("degenerate game: {0}")]
    DegenerateSupport(String),

    #[error("polytope contract violated: {0}")]
    Contract(String),

    #[error("record {record}: {msg}")]
    Record { record: usize, msg: String },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

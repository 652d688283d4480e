use core::fmt;

/// Everything that can go wrong inside the core crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// An agent index outside `0..n`.
    UnknownAgent(usize),
    /// A house index outside `0..n`.
    UnknownHouse(usize),
    /// A rank outside `1..=n`.
    RankOutOfRange(usize),
    /// Sizes of two objects that must agree do not.
    SizeMismatch { expected: usize, found: usize },
    /// A preference list is not a permutation of all houses.
    InvalidPreferences { agent: usize },
    /// A set of pairs is not a matching (repeated agent or house).
    NotAMatching,
    /// An edge used by a matching is missing from the graph.
    MissingEdge { agent: usize, house: usize },
    /// The matching handed to a routine that needs a maximum matching is not maximum.
    NotMaximum,
    /// A routine defined only for perfect matchings got a partial one.
    NotPerfect,
    /// Partial knowledge contradicts itself or the query that was just answered.
    Inconsistent(&'static str),
    /// A sequence of agents is not a permutation.
    InvalidPermutation,
    /// Exhaustive search refused because the estimated work exceeds the bound.
    BoundExceeded { estimate: u128, limit: u128 },
    /// A query was issued that the oracle's model does not support.
    WrongModel,
    /// A parameter violates its documented range.
    InvalidParameter(&'static str),
    /// A ratio with a zero denominator and nonzero numerator.
    UndefinedRatio,
    /// A matching is not necessarily optimal where that was required.
    NotNecessarilyOptimal,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownAgent(a) => write!(f, "unknown agent {a}"),
            Error::UnknownHouse(h) => write!(f, "unknown house {h}"),
            Error::RankOutOfRange(r) => write!(f, "rank {r} out of range"),
            Error::SizeMismatch { expected, found } => {
                write!(f, "size mismatch: expected {expected}, found {found}")
            }
            Error::InvalidPreferences { agent } => {
                write!(f, "preference list of agent {agent} is not a permutation of the houses")
            }
            Error::NotAMatching => f.write_str("pairs do not form a matching"),
            Error::MissingEdge { agent, house } => {
                write!(f, "edge ({agent}, {house}) is not in the graph")
            }
            Error::NotMaximum => f.write_str("matching is not maximum"),
            Error::NotPerfect => f.write_str("matching is not perfect"),
            Error::Inconsistent(why) => write!(f, "inconsistent knowledge: {why}"),
            Error::InvalidPermutation => f.write_str("not a permutation of the agents"),
            Error::BoundExceeded { estimate, limit } => {
                write!(f, "refusing exhaustive search: estimate {estimate} exceeds limit {limit}")
            }
            Error::WrongModel => f.write_str("query not supported by this query model"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::UndefinedRatio => f.write_str("ratio undefined: zero optimum with nonzero cost"),
            Error::NotNecessarilyOptimal => f.write_str("matching is not necessarily optimal"),
        }
    }
}

impl core::error::Error for Error {}

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A variable name that the distribution or channel does not carry.
    UnknownVariable(String),
    DuplicateVariable(String),
    /// Variable groups that must be disjoint share a name.
    OverlappingGroups(String),
    EmptySubset,
    ZeroSizedAlphabet(String),
    ShapeMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
    NotANumber(String),
    NegativeEntry(String),
    Normalization {
        what: String,
        sum: f64,
    },
    NegativeCost(usize),
    InvalidDistortion(String),
    /// The degradedness flag is set but `p(y,z|a,x)` does not factor.
    NotDegraded {
        residual: f64,
    },
    InvalidParameter(String),
    Infeasible(String),
    RowCapExceeded(usize),
    BudgetExceeded {
        estimate: f64,
        limit: f64,
    },
    Usage(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            Error::DuplicateVariable(v) => write!(f, "variable `{v}` declared twice"),
            Error::OverlappingGroups(v) => {
                write!(f, "variable `{v}` appears in more than one group")
            }
            Error::EmptySubset => f.write_str("variable subset must not be empty"),
            Error::ZeroSizedAlphabet(v) => write!(f, "alphabet `{v}` has size 0"),
            Error::ShapeMismatch {
                what,
                expected,
                found,
            } => write!(f, "{what}: expected {expected} entries, found {found}"),
            Error::NotANumber(what) => write!(f, "{what}: entry is NaN"),
            Error::NegativeEntry(what) => write!(f, "{what}: negative probability"),
            Error::Normalization { what, sum } => {
                write!(f, "{what}: probabilities sum to {sum}, expected 1")
            }
            Error::NegativeCost(a) => write!(f, "action {a} has a negative cost"),
            Error::InvalidDistortion(what) => write!(f, "invalid distortion table: {what}"),
            Error::NotDegraded { residual } => write!(
                f,
                "side information is not degraded (factorization residual {residual:e})"
            ),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::Infeasible(what) => write!(f, "infeasible: {what}"),
            Error::RowCapExceeded(rows) => {
                write!(f, "elimination exceeded the row cap ({rows} rows)")
            }
            Error::BudgetExceeded { estimate, limit } => write!(
                f,
                "enumeration needs about {estimate:e} evaluations, limit is {limit:e}"
            ),
            Error::Usage(what) => f.write_str(what),
        }
    }
}

impl core::error::Error for Error {}

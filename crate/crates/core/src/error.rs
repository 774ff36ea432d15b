use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands disagree in shape.
    Dimension { expected: usize, found: usize },
    /// An index fell outside `0..bound`.
    Index { index: usize, bound: usize },
    /// A scalar argument is outside its domain.
    Parameter(String),
    /// A zero vector was given where a direction is needed.
    DegenerateState,
    /// A NaN or infinite amplitude reached a constructor.
    NonFinite,
    /// The requested combination of options cannot run.
    Configuration(String),
    /// An operation was given a state that is not at the expected stage.
    ProtocolOrder(String),
    /// Probability drifted away from one during a run.
    NumericalIntegrity { drift: f64 },
    /// Postselection on an outcome that has no weight.
    DegenerateMeasurement { outcome: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Index { index, bound } => {
                write!(f, "index {index} out of range (must be below {bound})")
            }
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::DegenerateState => f.write_str("state has zero norm"),
            Error::NonFinite => f.write_str("amplitude is not finite"),
            Error::Configuration(msg) => write!(f, "invalid configuration: {msg}"),
            Error::ProtocolOrder(msg) => write!(f, "protocol order violated: {msg}"),
            Error::NumericalIntegrity { drift } => write!(
                f,
                "norm drifted by {drift:e}; the Fock cutoff is too small for this alpha \
                 (raise it or let choose_cutoff pick one)"
            ),
            Error::DegenerateMeasurement { outcome } => {
                write!(f, "register outcome {outcome} has zero probability")
            }
        }
    }
}

impl core::error::Error for Error {}

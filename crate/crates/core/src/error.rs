use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid name `{0}`: expected a letter followed by letters, digits or `_`")]
    InvalidName(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{count} variables exceed the exhaustive cap of {cap}")]
    TooManyVariables { count: usize, cap: usize },

    #[error("constant-0 function has no clause decomposition")]
    ConstantFunction,

    #[error("clause mentions `{0}` with both polarities")]
    ConflictingLiteral(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("wiring domain violation: {0}")]
    DomainViolation(String),

    #[error("name collision: `{0}` appears in both modules")]
    NameCollision(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("incompatible parts: {0}")]
    IncompatibleParts(String),

    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),

    #[error("invalid simulation scheme: {0}")]
    InvalidScheme(String),

    #[error("update mode for `{automaton}` is not input-first: step {step} updates `{node}`, which has inputs")]
    NotInputFirst {
        automaton: String,
        step: usize,
        node: String,
    },

    #[error("input `{0}` is not covered by any interface")]
    DanglingInput(String),

    #[error("local function of `{0}` is constant 0")]
    ConstantZeroFunction(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

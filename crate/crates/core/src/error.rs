use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },

    #[error("invalid language: {0}")]
    InvalidLanguage(String),

    #[error("variable z{0} is not bound by the assignment")]
    UnboundVariable(u32),

    #[error("constant `{0}` is not interpreted")]
    UnknownConstant(String),

    #[error("bad parameters for builtin `{kind}`: {message}")]
    BadParams { kind: String, message: String },

    #[error("`{literal}` is not an element of `{algebra}`")]
    ElementNotInCarrier { literal: String, algebra: String },

    #[error("algebras `{source_name}` and `{target_name}` do not share a language")]
    LanguageMismatch {
        source_name: String,
        target_name: String,
    },

    #[error("no algebra pair given and {0} algebras are loaded")]
    MissingAlgebra(usize),

    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("spec error at line {line}: {message}")]
    Spec { line: usize, message: String },

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("not a justification of the queried proportion")]
    NotAJustification,

    #[error("term `{0}` is out of bounds")]
    TermOutOfBounds(String),

    #[error("term is undefined at {0}")]
    UndefinedAt(String),

    #[error("axioms are only defined within a single domain")]
    NotSingleDomain,

    #[error("`{literal}` is not a subset of the universe")]
    NotSubsetOfUniverse { literal: String },

    #[error("{value} is outside the bound ±{bound}")]
    OutOfBound { value: i64, bound: i64 },

    #[error("scope of {size} exceeds the limit of {limit}")]
    ScopeTooLarge { size: usize, limit: usize },

    #[error("{0}")]
    Unsupported(String),
}

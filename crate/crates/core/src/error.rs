use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("operands belong to different polynomial rings")]
    RingMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is not in the program order")]
    VariableOutsideOrder(String),
    #[error("variable order mismatch: {0}")]
    OrderMismatch(String),
    #[error("expansion too large: more than {0} terms")]
    ExpansionTooLarge(usize),
    #[error("enumeration budget exceeded: {needed} Boolean variables, budget {budget}")]
    EnumerationBudget { needed: usize, budget: usize },
    #[error("auxiliary field variable `{0}` occurs nonlinearly")]
    NonlinearAuxiliary(String),
    #[error("cut position {t} out of range for a program with {n} layers")]
    CutOutOfRange { t: usize, n: usize },
    #[error("renaming is not injective: {0}")]
    NonInjectiveRenaming(String),
    #[error("malformed roABP: {0}")]
    MalformedProgram(String),
    #[error("DIMACS error on line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("shape violation: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("partial assignment: `{0}` is unassigned")]
    PartialAssignment(String),
    #[error("system is satisfiable; interpolation is undefined")]
    Satisfiable,
    #[error("proof is not tree-like: line {0} is used more than once")]
    NotTreeLike(usize),
    #[error("unsupported field characteristic: {0}")]
    Characteristic(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

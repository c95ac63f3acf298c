use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid abstraction: body has a dangling index besides the hole")]
    InvalidAbstraction,
    #[error("argument is not a proper term")]
    NonProperArgument,
    #[error("term is not proper")]
    NonProper,
    #[error("index overflow")]
    IndexOverflow,
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("duplicate name `{0}` in variable context")]
    DuplicateName(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("not a second-order pattern: {0}")]
    NonPattern(String),
    #[error("invalid clause database: {0}")]
    InvalidDatabase(String),
    #[error("goal not supported by this logic: {0}")]
    UnsupportedGoal(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

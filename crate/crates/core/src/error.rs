use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("word `{0}` is not over the alphabet")]
    Word(String),
    #[error("not a prefix code: `{0}` is a prefix of `{1}`")]
    NotPrefixCode(String, String),
    #[error("operands live over different alphabets")]
    AlphabetMismatch,
    #[error("index {0} out of range")]
    Index(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration cap exceeded: {needed} evaluations requested, cap is {cap}")]
    Cap { needed: u128, cap: u128 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid circuit: {0}")]
    Circuit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::seqcore::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol {symbol} is not in alphabet {alphabet}")]
    SymbolOutOfRange { symbol: u64, alphabet: Alphabet },

    #[error("alphabet mismatch: expected {expected}, got {got}")]
    AlphabetMismatch { expected: Alphabet, got: Alphabet },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("bound exceeded: index {index} needs more than {bound}")]
    BoundExceeded { index: u64, bound: u64 },

    #[error("arithmetic overflow")]
    Overflow,

    #[error("cap exceeded: horizon {horizon} > cap {cap}")]
    CapExceeded { horizon: u64, cap: u64 },

    #[error("too large: {what} = {value} exceeds {limit}")]
    TooLarge { what: &'static str, value: u64, limit: u64 },

    #[error("word is not placed: {0}")]
    NotPlaced(String),

    #[error("word of length {len} does not reach position {position}")]
    TooShort { len: usize, position: u64 },

    #[error("word {word} is inconsistent with K^0 of t = {t}")]
    Inconsistent { word: String, t: String },

    #[error("non-unique witness for {word}: {first} and {second}")]
    NonUniqueWitness { word: String, first: String, second: String },

    #[error("empty word not allowed here")]
    EmptyWord,

    #[error("unknown suite: {0}")]
    UnknownSuite(String),

    #[error("unknown family: {0}")]
    UnknownFamily(String),

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

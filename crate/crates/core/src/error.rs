use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid base {0}: base must be at least 2")]
    InvalidBase(u64),

    #[error("digit {digit} at place {place} is out of range for base {base}")]
    DigitOutOfRange { base: u64, place: usize, digit: u64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid modulus {0}: modulus must be at least 2")]
    InvalidModulus(u64),

    #[error("i = {i} exceeds n = {n}")]
    IndexExceedsRow { n: u64, i: u64 },

    #[error("n = {n} exceeds the brute-force oracle cap {cap}")]
    AboveOracleCap { n: u64, cap: u64 },

    #[error("row count must be at least {min}, got {got}")]
    InvalidRowCount { min: u64, got: u64 },

    #[error("place 0 is never special: n has bit 1 there only when exactly one of i, j does")]
    PlaceZero,

    #[error("cannot parse {input:?} as a number in base {base}")]
    Parse { input: String, base: u64 },

    #[error("residue {residue} out of range for modulus {modulus}")]
    ResidueOutOfRange { modulus: u64, residue: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An identity that must hold for all inputs failed. Only a bug can produce
    /// this; the verify harness reports it as a counterexample.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn is_theorem_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}

//! Digit arithmetic, carry counting and divisibility in Pascal's triangle.
//!
//! The crate is layered bottom-up:
//!
//! * [`digits`]: canonical base-b representations and digit sums.
//! * [`carries`]: column addition with a full carry trace, the digit-sum
//!   carry formula, and binary stopping-carry / special-place analysis.
//! * [`valuation`]: factors of a prime in `n!` and in `C(n, i)`, each by
//!   several independent routes, plus divisibility by composite moduli.
//! * [`triangle`]: rows of Pascal's triangle modulo `m` and divisibility
//!   masks computed three ways.
//! * [`render`]: ASCII, JSON and Netpbm output of masks, residues and stripe
//!   overlays.
//! * [`verify`]: the property sweep harness behind `kummer verify`.
//! * [`cli`]: argument parsing and subcommand dispatch.
//!
//! No binomial coefficient is ever formed as an integer beyond `n = 20`;
//! everything else works with valuations or residues, so all arithmetic fits
//! in `u64` with overflow checks.

pub mod carries;
pub mod cli;
pub mod digits;
mod error;
pub mod render;
pub mod triangle;
pub mod valuation;
pub mod verify;

pub use error::{Error, Result};

//! Canonical place-value representations of naturals.
//!
//! Digits are stored little-endian: index `k` holds the coefficient of
//! `base^k`. Zero is the empty digit vector. Anything shown to a human is
//! big-endian with the base annotated, e.g. `4017 (base 9)`.

use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// Largest accepted base, `2^63 - 1`.
pub const MAX_BASE: u64 = (1 << 63) - 1;

/// A positional base, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Base(u64);

impl Base {
    pub const BINARY: Base = Base(2);

    pub fn new(b: u64) -> Result<Self> {
        if (2..=MAX_BASE).contains(&b) {
            Ok(Base(b))
        } else {
            Err(Error::InvalidBase(b))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Canonical little-endian digit string of a natural number.
///
/// Every digit lies in `[0, base)`, the highest-index digit is nonzero and the
/// value fits in a `u64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DigitVector {
    base: Base,
    digits: Vec<u64>,
}

impl DigitVector {
    /// Builds a digit vector from little-endian digits, dropping high zeros.
    pub fn new(base: Base, digits: &[u64]) -> Result<Self> {
        from_digits(base.get(), digits)?;
        let len = digits.iter().rposition(|&d| d != 0).map_or(0, |k| k + 1);
        Ok(DigitVector {
            base,
            digits: digits[..len].to_vec(),
        })
    }

    pub fn zero(base: Base) -> Self {
        DigitVector {
            base,
            digits: Vec::new(),
        }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// Little-endian digits.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at place `k`, zero past the highest digit.
    pub fn get(&self, k: usize) -> u64 {
        self.digits.get(k).copied().unwrap_or(0)
    }

    pub fn value(&self) -> u64 {
        from_digits(self.base.get(), &self.digits)
            .expect("DigitVector invariant: value fits in u64")
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    /// Big-endian digit string without the base annotation, e.g. `4017`.
    ///
    /// Bases up to 36 use one symbol per digit (`0-9a-z`); larger bases print
    /// decimal digit values joined by `:`.
    pub fn digit_string(&self) -> String {
        if self.digits.is_empty() {
            return "0".to_string();
        }
        if self.base.get() <= 36 {
            self.digits
                .iter()
                .rev()
                .map(|&d| char::from_digit(d as u32, 36).expect("digit below base"))
                .collect()
        } else {
            let parts: Vec<String> = self.digits.iter().rev().map(u64::to_string).collect();
            parts.join(":")
        }
    }
}

impl fmt::Display for DigitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (base {})", self.digit_string(), self.base)
    }
}

/// Digits of `n` in base `b` by repeated division; remainders come out
/// least-significant first.
pub fn to_digits(n: u64, b: u64) -> Result<DigitVector> {
    let base = Base::new(b)?;
    let mut digits = Vec::new();
    let mut rest = n;
    while rest > 0 {
        digits.push(rest % b);
        rest /= b;
    }
    Ok(DigitVector { base, digits })
}

/// `Σ d_k · b^k`, rejecting out-of-range digits and values beyond `u64`.
pub fn from_digits(b: u64, digits: &[u64]) -> Result<u64> {
    let base = Base::new(b)?.get();
    if let Some((place, &digit)) = digits.iter().enumerate().find(|(_, &d)| d >= base) {
        return Err(Error::DigitOutOfRange { base, place, digit });
    }
    // Horner from the most significant digit.
    digits.iter().rev().try_fold(0u64, |acc, &d| {
        acc.checked_mul(base)
            .and_then(|v| v.checked_add(d))
            .ok_or(Error::Overflow("from_digits"))
    })
}

/// `⌊n / b^k⌋`, which is zero once `b^k` exceeds the `u64` range.
fn floor_div_pow(n: u64, b: u64, k: usize) -> u64 {
    u32::try_from(k)
        .ok()
        .and_then(|k| b.checked_pow(k))
        .map_or(0, |pow| n / pow)
}

/// The `k`-th digit of `n` in base `b`, computed as
/// `⌊n / b^k⌋ - b·⌊n / b^(k+1)⌋`.
pub fn digit_at(n: u64, b: u64, k: usize) -> Result<u64> {
    let b = Base::new(b)?.get();
    let high = floor_div_pow(n, b, k);
    let higher = floor_div_pow(n, b, k + 1);
    // b·⌊n/b^(k+1)⌋ ≤ ⌊n/b^k⌋, so neither step can overflow.
    Ok(high - b * higher)
}

/// Sum of the base-`b` digits of `n`.
pub fn digit_sum(n: u64, b: u64) -> Result<u64> {
    let base = Base::new(b)?.get();
    let mut rest = n;
    let mut sum = 0u64;
    while rest > 0 {
        // At most two digits when b > 2^32, each below 2^63: no overflow.
        sum += rest % base;
        rest /= base;
    }
    Ok(sum)
}

/// Parses a numeral written in base 2..=36 (the alphabet `0-9a-z`).
pub fn parse_natural(text: &str, b: u64) -> Result<u64> {
    let base = Base::new(b)?.get();
    let parse_err = || Error::Parse {
        input: text.to_string(),
        base,
    };
    if base > 36 {
        return Err(parse_err());
    }
    u64::from_str_radix(text, base as u32).map_err(|_| parse_err())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn repeated_division_examples() {
        assert_eq!(to_digits(2932, 9).unwrap().digits(), &[7, 1, 0, 4]);
        assert_eq!(to_digits(1892, 7).unwrap().digits(), &[2, 4, 3, 5]);
        assert!(to_digits(0, 7).unwrap().is_zero());
    }

    #[test]
    fn reconstruct_examples() {
        assert_eq!(from_digits(7, &[2, 4, 3, 5]).unwrap(), 1892);
        assert_eq!(from_digits(9, &[7, 1, 0, 4]).unwrap(), 2932);
        assert_eq!(from_digits(13, &[]).unwrap(), 0);
    }

    #[test]
    fn from_digits_rejects_out_of_range() {
        let err = from_digits(7, &[2, 7, 1]).unwrap_err();
        assert!(matches!(
            err,
            Error::DigitOutOfRange {
                base: 7,
                place: 1,
                digit: 7
            }
        ));
    }

    #[test]
    fn from_digits_rejects_overflow() {
        let err = from_digits(2, &[1; 65]).unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
        assert_eq!(from_digits(2, &[1; 64]).unwrap(), u64::MAX);
    }

    #[test]
    fn invalid_bases() {
        for b in [0, 1, MAX_BASE + 1, u64::MAX] {
            assert!(matches!(to_digits(5, b), Err(Error::InvalidBase(_))));
            assert!(matches!(digit_at(5, b, 0), Err(Error::InvalidBase(_))));
            assert!(matches!(digit_sum(5, b), Err(Error::InvalidBase(_))));
        }
        assert!(to_digits(u64::MAX, MAX_BASE).is_ok());
    }

    #[test]
    fn digit_at_examples() {
        assert_eq!(digit_at(2932, 9, 0).unwrap(), 7);
        assert_eq!(digit_at(2932, 9, 3).unwrap(), 4);
        assert_eq!(digit_at(2932, 9, 10).unwrap(), 0);
        assert_eq!(digit_at(u64::MAX, 2, 63).unwrap(), 1);
        assert_eq!(digit_at(u64::MAX, 2, 64).unwrap(), 0);
        assert_eq!(digit_at(u64::MAX, 2, 1000).unwrap(), 0);
    }

    #[test]
    fn digit_sum_examples() {
        assert_eq!(digit_sum(2932, 9).unwrap(), 12);
        assert_eq!(digit_sum(5, 7).unwrap(), 5);
        // 132 = 1012 in base 5
        assert_eq!(to_digits(132, 5).unwrap().digits(), &[2, 1, 0, 1]);
        assert_eq!(digit_sum(132, 5).unwrap(), 4);
        assert_eq!(digit_sum(0, 5).unwrap(), 0);
        // 2^64 - 1 = 2·(2^63 - 1) + 1
        assert_eq!(digit_sum(u64::MAX, MAX_BASE).unwrap(), 3);
    }

    #[test]
    fn display_is_big_endian_with_base() {
        assert_eq!(to_digits(2932, 9).unwrap().to_string(), "4017 (base 9)");
        assert_eq!(to_digits(0, 9).unwrap().to_string(), "0 (base 9)");
        assert_eq!(to_digits(255, 16).unwrap().digit_string(), "ff");
        assert_eq!(to_digits(100 * 37 + 5, 100).unwrap().digit_string(), "37:5");
    }

    #[test]
    fn new_canonicalizes() {
        let d = DigitVector::new(Base::new(10).unwrap(), &[3, 0, 0]).unwrap();
        assert_eq!(d.digits(), &[3]);
        assert_eq!(d.value(), 3);
        assert!(DigitVector::new(Base::new(10).unwrap(), &[0, 0])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn parse_in_base() {
        assert_eq!(parse_natural("253", 7).unwrap(), 136);
        assert_eq!(parse_natural("415", 7).unwrap(), 208);
        assert!(parse_natural("7", 7).is_err());
        assert!(parse_natural("10", 40).is_err());
    }

    fn digits_oracle_at(n: u64, b: u64, k: usize) -> u64 {
        to_digits(n, b).unwrap().get(k)
    }

    proptest! {
        #[test]
        fn round_trip(n in any::<u64>(), b in 2u64..1000) {
            let d = to_digits(n, b).unwrap();
            prop_assert_eq!(from_digits(b, d.digits()).unwrap(), n);
            prop_assert!(d.digits().last().is_none_or(|&top| top != 0));
            prop_assert!(d.digits().iter().all(|&x| x < b));
        }

        #[test]
        fn floor_formula_matches_list(n in any::<u64>(), b in 2u64..1000) {
            let len = to_digits(n, b).unwrap().len();
            for k in 0..len + 3 {
                prop_assert_eq!(digit_at(n, b, k).unwrap(), digits_oracle_at(n, b, k));
            }
        }

        #[test]
        fn digit_sum_congruent_mod_b_minus_1(n in any::<u64>(), b in 3u64..1000) {
            prop_assert_eq!(digit_sum(n, b).unwrap() % (b - 1), n % (b - 1));
        }
    }
}

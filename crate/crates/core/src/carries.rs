//! Column addition with a complete carry record.
//!
//! [`add_with_trace`] simulates schoolbook addition place by place. The
//! carry count it produces is cross-checked elsewhere against the digit-sum
//! formula `c = (I + J - N) / (b - 1)` ([`carry_count_digit_formula`]).
//!
//! In base 2 every run of carries ends in a *stopping* place whose column
//! reads `0 + 0` plus the incoming carry, giving sum digit 1. Those places are
//! exactly the [`special_places`] of the pair.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::digits::{digit_at, to_digits, Base, DigitVector};
use crate::{Error, Result};

/// Record of the addition `i + j = n` in one base.
///
/// All per-place vectors have the same length: one more than the longer
/// addend, so the final carry always lands. Adding `0 + 0` yields an empty
/// trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CarryTrace {
    pub base: Base,
    pub addend_i: DigitVector,
    pub addend_j: DigitVector,
    pub sum_n: DigitVector,
    pub carry_in: Vec<bool>,
    pub carry_out: Vec<bool>,
    pub stopping: Vec<bool>,
    pub carry_count: u64,
}

impl CarryTrace {
    /// Number of places in the trace.
    pub fn places(&self) -> usize {
        self.carry_out.len()
    }

    /// Maximal runs of consecutive carrying places, as `(first, last)` pairs.
    pub fn carry_runs(&self) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = None;
        for (k, &c) in self.carry_out.iter().enumerate() {
            match (c, start) {
                (true, None) => start = Some(k),
                (false, Some(s)) => {
                    runs.push((s, k - 1));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s, self.places() - 1));
        }
        runs
    }

    /// Checks the per-place column identities. Returns the first failure.
    pub fn check_invariants(&self) -> Result<()> {
        let b = u128::from(self.base.get());
        let mut count = 0u64;
        for k in 0..self.places() {
            let lhs = u128::from(self.addend_i.get(k))
                + u128::from(self.addend_j.get(k))
                + u128::from(self.carry_in[k]);
            let rhs = u128::from(self.sum_n.get(k)) + b * u128::from(self.carry_out[k]);
            if lhs != rhs {
                return Err(violation(format!("column identity fails at place {k}")));
            }
            let expected_in = k > 0 && self.carry_out[k - 1];
            if self.carry_in[k] != expected_in {
                return Err(violation(format!("carry_in mismatch at place {k}")));
            }
            if self.stopping[k] != (self.carry_in[k] && !self.carry_out[k]) {
                return Err(violation(format!("stopping flag mismatch at place {k}")));
            }
            count += u64::from(self.carry_out[k]);
        }
        if count != self.carry_count {
            return Err(violation("carry_count disagrees with carry_out".into()));
        }
        Ok(())
    }

    /// Column-addition diagram with the carry row above the addends and `*`
    /// under each stopping place.
    pub fn diagram(&self) -> String {
        let places = self.places().max(self.sum_n.len()).max(1);
        let symbol = |d: u64| -> String {
            if self.base.get() <= 36 {
                char::from_digit(d as u32, 36)
                    .expect("digit below base")
                    .to_string()
            } else {
                d.to_string()
            }
        };
        let width = symbol(self.base.get() - 1).len();
        let row = |cell: &dyn Fn(usize) -> Option<String>| -> String {
            let mut line = String::new();
            for k in (0..places).rev() {
                let text = cell(k).unwrap_or_default();
                let _ = write!(line, " {text:>width$}");
            }
            line
        };
        let digits_row = |dv: &DigitVector| {
            row(&|k| {
                if k < dv.len() || (k == 0 && dv.is_zero()) {
                    Some(symbol(dv.get(k)))
                } else {
                    None
                }
            })
        };
        let carries = row(&|k| {
            self.carry_in
                .get(k)
                .filter(|&&c| c)
                .map(|_| "1".to_string())
        });
        let stops = row(&|k| {
            self.stopping
                .get(k)
                .filter(|&&s| s)
                .map(|_| "*".to_string())
        });
        let rule = "-".repeat(places * (width + 1));

        let mut out = String::new();
        let _ = writeln!(out, "carry {}", carries.trim_end());
        let _ = writeln!(out, "      {}", digits_row(&self.addend_i));
        let _ = writeln!(out, "    + {}", digits_row(&self.addend_j));
        let _ = writeln!(out, "      {rule}");
        let _ = writeln!(out, "      {}", digits_row(&self.sum_n));
        let _ = writeln!(out, "stop  {}", stops.trim_end());
        out
    }
}

fn violation(msg: String) -> Error {
    Error::TheoremViolation(msg)
}

/// Adds `i + j` in base `b`, recording every carry.
pub fn add_with_trace(i: u64, j: u64, b: u64) -> Result<CarryTrace> {
    let base = Base::new(b)?;
    let n = i.checked_add(j).ok_or(Error::Overflow("i + j"))?;
    let addend_i = to_digits(i, b)?;
    let addend_j = to_digits(j, b)?;

    let places = if i == 0 && j == 0 {
        0
    } else {
        addend_i.len().max(addend_j.len()) + 1
    };

    let mut carry_in = Vec::with_capacity(places);
    let mut carry_out = Vec::with_capacity(places);
    let mut stopping = Vec::with_capacity(places);
    let mut sum_digits = Vec::with_capacity(places);
    let mut carry = false;
    for k in 0..places {
        // Each digit is below 2^63 - 1, so the column total fits in u64.
        let total = addend_i.get(k) + addend_j.get(k) + u64::from(carry);
        let out = total >= b;
        sum_digits.push(if out { total - b } else { total });
        carry_in.push(carry);
        carry_out.push(out);
        stopping.push(carry && !out);
        carry = out;
    }

    let sum_n = DigitVector::new(base, &sum_digits)?;
    if sum_n.value() != n {
        return Err(violation(format!(
            "column addition of {i} + {j} in base {b} produced {}",
            sum_n.value()
        )));
    }
    let carry_count = carry_out.iter().filter(|&&c| c).count() as u64;
    Ok(CarryTrace {
        base,
        addend_i,
        addend_j,
        sum_n,
        carry_in,
        carry_out,
        stopping,
        carry_count,
    })
}

/// Digit sums of both addends and the sum, and the carry count they imply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CarryAccounting {
    pub i_sum: u64,
    pub j_sum: u64,
    pub n_sum: u64,
    /// `I + J - N`: how much the digit total drops during the addition.
    pub decrease: u128,
    pub carries: u64,
}

/// Computes `I + J - N` and divides by `b - 1`, failing with a theorem
/// violation if the difference is negative or the division is inexact.
pub fn digit_sum_accounting(i: u64, j: u64, b: u64) -> Result<CarryAccounting> {
    let base = Base::new(b)?.get();
    let n = i.checked_add(j).ok_or(Error::Overflow("i + j"))?;
    let i_sum = to_digits(i, base)?.digit_sum();
    let j_sum = to_digits(j, base)?.digit_sum();
    let n_sum = to_digits(n, base)?.digit_sum();
    let gross = u128::from(i_sum) + u128::from(j_sum);
    let decrease = gross.checked_sub(u128::from(n_sum)).ok_or_else(|| {
        violation(format!(
            "digit sums I + J = {gross} below N = {n_sum} for {i} + {j} in base {base}"
        ))
    })?;
    let per_carry = u128::from(base - 1);
    if decrease % per_carry != 0 {
        return Err(violation(format!(
            "I + J - N = {decrease} not divisible by {per_carry} for {i} + {j} in base {base}"
        )));
    }
    let carries =
        u64::try_from(decrease / per_carry).map_err(|_| Error::Overflow("carry count"))?;
    Ok(CarryAccounting {
        i_sum,
        j_sum,
        n_sum,
        decrease,
        carries,
    })
}

/// Carry count of `i + j` in base `b` from digit sums alone.
pub fn carry_count_digit_formula(i: u64, j: u64, b: u64) -> Result<u64> {
    digit_sum_accounting(i, j, b).map(|a| a.carries)
}

/// Places where a run of carries ends.
///
/// For base-2 traces, also checks that each stopping column reads `0 + 0`
/// with sum digit 1.
pub fn stopping_places(trace: &CarryTrace) -> Result<BTreeSet<usize>> {
    let places: BTreeSet<usize> = trace
        .stopping
        .iter()
        .enumerate()
        .filter_map(|(k, &s)| s.then_some(k))
        .collect();
    if trace.base == Base::BINARY {
        for &k in &places {
            let column = (
                trace.addend_i.get(k),
                trace.addend_j.get(k),
                trace.sum_n.get(k),
            );
            if column != (0, 0, 1) {
                return Err(violation(format!(
                    "binary stopping place {k} reads {column:?}, expected (0, 0, 1)"
                )));
            }
        }
    }
    Ok(places)
}

/// Bit positions where `i` and `j = n - i` are both 0 and `n` is 1.
///
/// Nonempty exactly when the binary addition `i + j` carries; that
/// equivalence is checked on every call.
pub fn special_places(n: u64, i: u64) -> Result<BTreeSet<usize>> {
    if i > n {
        return Err(Error::IndexExceedsRow { n, i });
    }
    let j = n - i;
    let mut special = BTreeSet::new();
    for k in 0..u64::BITS as usize {
        if digit_at(i, 2, k)? == 0 && digit_at(j, 2, k)? == 0 && digit_at(n, 2, k)? == 1 {
            special.insert(k);
        }
    }
    let carries = add_with_trace(i, j, 2)?.carry_count;
    if special.is_empty() != (carries == 0) {
        return Err(violation(format!(
            "{i} + {j} has {carries} binary carries but special places {special:?}"
        )));
    }
    Ok(special)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn base_seven_example() {
        // 253₇ + 415₇
        let t = add_with_trace(136, 208, 7).unwrap();
        assert_eq!(t.sum_n.digit_string(), "1001");
        assert_eq!(t.carry_count, 3);
        assert_eq!(stopping_places(&t).unwrap(), set(&[3]));
        t.check_invariants().unwrap();

        let acc = digit_sum_accounting(136, 208, 7).unwrap();
        assert_eq!((acc.i_sum, acc.j_sum, acc.n_sum), (10, 10, 2));
        assert_eq!(acc.decrease, 18);
        assert_eq!(acc.carries, 3);
    }

    #[test]
    fn adding_zero_never_carries() {
        for b in [2, 3, 7, 10, 1000] {
            let t = add_with_trace(0, 12345, b).unwrap();
            assert_eq!(t.carry_count, 0);
            assert_eq!(t.sum_n, to_digits(12345, b).unwrap());
            assert!(stopping_places(&t).unwrap().is_empty());
            assert_eq!(carry_count_digit_formula(0, 12345, b).unwrap(), 0);
        }
    }

    #[test]
    fn zero_plus_zero_is_empty() {
        let t = add_with_trace(0, 0, 5).unwrap();
        assert_eq!(t.places(), 0);
        assert_eq!(t.carry_count, 0);
        assert!(t.sum_n.is_zero());
    }

    #[test]
    fn binary_example_1011_plus_1001() {
        let t = add_with_trace(11, 9, 2).unwrap();
        assert_eq!(t.sum_n.digit_string(), "10100");
        assert_eq!(t.carry_count, 3);
        assert_eq!(t.carry_out, vec![true, true, false, true, false]);
        assert_eq!(stopping_places(&t).unwrap(), set(&[2, 4]));
        assert_eq!(carry_count_digit_formula(11, 9, 2).unwrap(), 3);
    }

    #[test]
    fn one_plus_one() {
        let t = add_with_trace(1, 1, 2).unwrap();
        assert_eq!(stopping_places(&t).unwrap(), set(&[1]));
    }

    #[test]
    fn formula_examples() {
        assert_eq!(carry_count_digit_formula(136, 208, 7).unwrap(), 3);
        assert_eq!(carry_count_digit_formula(0, 77, 3).unwrap(), 0);
    }

    #[test]
    fn special_place_examples() {
        assert_eq!(special_places(20, 11).unwrap(), set(&[2, 4]));
        assert_eq!(special_places(2, 1).unwrap(), set(&[1]));
        for n in [0, 1, 7, 64, 1000] {
            assert!(special_places(n, 0).unwrap().is_empty());
        }
        assert!(matches!(
            special_places(3, 4),
            Err(Error::IndexExceedsRow { n: 3, i: 4 })
        ));
    }

    #[test]
    fn overflow_and_bad_base_rejected() {
        assert!(matches!(
            add_with_trace(u64::MAX, 1, 2),
            Err(Error::Overflow(_))
        ));
        assert!(matches!(
            add_with_trace(1, 1, 1),
            Err(Error::InvalidBase(1))
        ));
        assert!(matches!(
            carry_count_digit_formula(u64::MAX, 1, 2),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn extreme_base_and_values() {
        let b = crate::digits::MAX_BASE;
        let t = add_with_trace(b - 1, b - 1, b).unwrap();
        assert_eq!(t.carry_count, 1);
        t.check_invariants().unwrap();
        assert_eq!(carry_count_digit_formula(b - 1, b - 1, b).unwrap(), 1);
        let t = add_with_trace(u64::MAX / 2, u64::MAX / 2 + 1, 2).unwrap();
        assert_eq!(t.carry_count, 0);
    }

    #[test]
    fn diagram_marks_stops() {
        let d = add_with_trace(136, 208, 7).unwrap().diagram();
        let lines: Vec<&str> = d.lines().collect();
        assert_eq!(lines[0], "carry  1 1 1");
        assert_eq!(lines[1], "         2 5 3");
        assert_eq!(lines[2], "    +    4 1 5");
        assert_eq!(lines[3], "      --------");
        assert_eq!(lines[4], "       1 0 0 1");
        assert_eq!(lines[5], "stop   *");
    }

    #[test]
    fn special_equals_stopping_exhaustive() {
        for n in 0..=1024u64 {
            for i in 0..=n {
                let special = special_places(n, i).unwrap();
                let stops = stopping_places(&add_with_trace(i, n - i, 2).unwrap()).unwrap();
                assert_eq!(special, stops, "n={n} i={i}");
                assert!(!special.contains(&0));
            }
        }
    }

    proptest! {
        #[test]
        fn digit_formula_matches_simulation(i in 0u64..1 << 62, j in 0u64..1 << 62, b in 2u64..1000) {
            let t = add_with_trace(i, j, b).unwrap();
            t.check_invariants().unwrap();
            prop_assert_eq!(carry_count_digit_formula(i, j, b).unwrap(), t.carry_count);
            prop_assert_eq!(t.sum_n.value(), i + j);
        }

        #[test]
        fn every_carry_stops(i in 0u64..1 << 62, j in 0u64..1 << 62, b in 2u64..50) {
            let t = add_with_trace(i, j, b).unwrap();
            let stops = stopping_places(&t).unwrap();
            prop_assert_eq!(t.carry_runs().len(), stops.len());
            prop_assert!(t.carry_out.last().is_none_or(|&c| !c));
        }
    }
}

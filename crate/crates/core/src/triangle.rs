//! Pascal's triangle modulo `m`.
//!
//! Rows are produced one at a time from their predecessor, each entry being
//! the sum of its two upstairs neighbours reduced mod `m`. For prime moduli a
//! single entry can also be evaluated directly from base-`p` digits, and the
//! zero pattern is available three independent ways (see [`MaskMethod`]).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::digits::{digit_at, to_digits};
use crate::valuation::{is_prime, kummer_valuation};
use crate::{Error, Result};

/// Residues packed in the narrowest unsigned type that holds `m - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Residues {
    U8(Vec<u8>),
    U16(Vec<u16>),
    U32(Vec<u32>),
    U64(Vec<u64>),
}

macro_rules! with_residues {
    ($r:expr, $v:ident => $body:expr) => {
        match $r {
            Residues::U8($v) => $body,
            Residues::U16($v) => $body,
            Residues::U32($v) => $body,
            Residues::U64($v) => $body,
        }
    };
}

impl Residues {
    fn from_u64(modulus: u64, values: &[u64]) -> Self {
        let max = modulus - 1;
        if max <= u64::from(u8::MAX) {
            Residues::U8(values.iter().map(|&v| v as u8).collect())
        } else if max <= u64::from(u16::MAX) {
            Residues::U16(values.iter().map(|&v| v as u16).collect())
        } else if max <= u64::from(u32::MAX) {
            Residues::U32(values.iter().map(|&v| v as u32).collect())
        } else {
            Residues::U64(values.to_vec())
        }
    }

    fn len(&self) -> usize {
        with_residues!(self, v => v.len())
    }

    #[allow(clippy::useless_conversion)]
    fn get(&self, k: usize) -> u64 {
        with_residues!(self, v => u64::from(v[k]))
    }

    fn next(&self, modulus: u64) -> Self {
        match self {
            Residues::U8(v) => Residues::U8(step(v, modulus)),
            Residues::U16(v) => Residues::U16(step(v, modulus)),
            Residues::U32(v) => Residues::U32(step(v, modulus)),
            Residues::U64(v) => Residues::U64(step(v, modulus)),
        }
    }
}

/// `(a + b) mod m` for `a, b < m` without overflow.
#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

fn step<T>(prev: &[T], modulus: u64) -> Vec<T>
where
    T: Copy + Into<u64> + TryFrom<u64>,
{
    let narrow = |x: u64| T::try_from(x).ok().expect("residue fits its storage width");
    let one = narrow(1);
    let mut next = Vec::with_capacity(prev.len() + 1);
    next.push(one);
    for pair in prev.windows(2) {
        next.push(narrow(add_mod(pair[0].into(), pair[1].into(), modulus)));
    }
    next.push(one);
    next
}

/// Row `n` of Pascal's triangle reduced modulo `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleRow {
    modulus: u64,
    n: u64,
    entries: Residues,
}

impl TriangleRow {
    /// Row 0, the single entry 1.
    pub fn first(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(TriangleRow {
            modulus,
            n: 0,
            entries: Residues::from_u64(modulus, &[1]),
        })
    }

    /// Wraps caller-supplied residues for row `n`; requires `n + 1` entries,
    /// each below `modulus`.
    pub fn from_entries(modulus: u64, n: u64, entries: &[u64]) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        if entries.len() as u64 != n + 1 {
            return Err(Error::InvalidArgument(format!(
                "row {n} needs {} entries, got {}",
                n + 1,
                entries.len()
            )));
        }
        if let Some(&residue) = entries.iter().find(|&&r| r >= modulus) {
            return Err(Error::ResidueOutOfRange { modulus, residue });
        }
        Ok(TriangleRow {
            modulus,
            n,
            entries: Residues::from_u64(modulus, entries),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.n
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, k: usize) -> u64 {
        self.entries.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len()).map(move |k| self.get(k))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Row `n + 1`: boundary entries 1, interior entries the sum of the two
    /// entries above, mod `m`.
    pub fn next_row(&self) -> TriangleRow {
        TriangleRow {
            modulus: self.modulus,
            n: self.n + 1,
            entries: self.entries.next(self.modulus),
        }
    }

    /// Boundary and mirror-symmetry check.
    pub fn check_invariants(&self) -> bool {
        let len = self.len();
        len as u64 == self.n + 1
            && self.get(0) == 1
            && self.get(len - 1) == 1
            && (0..len / 2).all(|k| self.get(k) == self.get(len - 1 - k))
    }
}

impl Serialize for TriangleRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TriangleRow", 3)?;
        s.serialize_field("modulus", &self.modulus)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("entries", &self.to_vec())?;
        s.end()
    }
}

/// Unbounded stream of rows using a single rolling buffer.
#[derive(Debug, Clone)]
pub struct Rows {
    next: TriangleRow,
}

impl Iterator for Rows {
    type Item = TriangleRow;

    fn next(&mut self) -> Option<TriangleRow> {
        let following = self.next.next_row();
        Some(std::mem::replace(&mut self.next, following))
    }
}

/// Rows `0, 1, 2, …` of Pascal's triangle mod `m`.
pub fn rows(modulus: u64) -> Result<Rows> {
    Ok(Rows {
        next: TriangleRow::first(modulus)?,
    })
}

/// The first `count` rows mod `m`.
pub fn generate_rows(modulus: u64, count: u64) -> Result<Vec<TriangleRow>> {
    let rows = rows(modulus)?;
    if count < 1 {
        return Err(Error::InvalidRowCount { min: 1, got: count });
    }
    Ok(rows.take(count as usize).collect())
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `C(a, b) mod p` for `b ≤ a < p`. Runs in `min(b, a - b)` multiplications.
fn small_binomial_mod(a: u64, b: u64, p: u64) -> u64 {
    let b = b.min(a - b);
    let mut num = 1;
    let mut den = 1;
    for t in 0..b {
        num = mul_mod(num, a - t, p);
        den = mul_mod(den, t + 1, p);
    }
    // den is a product of factors below p, hence invertible.
    mul_mod(num, pow_mod(den, p - 2, p), p)
}

/// `C(n, i) mod p` as the product of `C(n_k, i_k)` over base-`p` digits.
pub fn entry_mod_prime(n: u64, i: u64, p: u64) -> Result<u64> {
    if i > n {
        return Err(Error::IndexExceedsRow { n, i });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (mut n_rest, mut i_rest) = (n, i);
    let mut acc = 1 % p;
    while i_rest > 0 {
        let (nk, ik) = (n_rest % p, i_rest % p);
        if ik > nk {
            return Ok(0);
        }
        acc = mul_mod(acc, small_binomial_mod(nk, ik, p), p);
        n_rest /= p;
        i_rest /= p;
    }
    Ok(acc)
}

/// Whether every base-`p` digit of `i` is at most the matching digit of `n`.
pub fn digits_dominated(i: u64, n: u64, p: u64) -> bool {
    let (mut i, mut n) = (i, n);
    while i > 0 {
        if i % p > n % p {
            return false;
        }
        i /= p;
        n /= p;
    }
    true
}

/// Boolean values on the triangular coordinates `0 ≤ i ≤ n < rows`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGrid {
    rows: u64,
    cells: Vec<bool>,
}

fn row_start(n: u64) -> usize {
    (n * (n + 1) / 2) as usize
}

impl CellGrid {
    pub fn from_fn(rows: u64, mut f: impl FnMut(u64, u64) -> bool) -> Self {
        let mut cells = Vec::with_capacity(row_start(rows));
        for n in 0..rows {
            cells.extend((0..=n).map(|i| f(n, i)));
        }
        CellGrid { rows, cells }
    }

    /// Same as [`CellGrid::from_fn`], evaluating rows on the rayon pool.
    pub fn par_from_fn(rows: u64, f: impl Fn(u64, u64) -> bool + Sync) -> Self {
        let per_row: Vec<Vec<bool>> = (0..rows)
            .into_par_iter()
            .map(|n| (0..=n).map(|i| f(n, i)).collect())
            .collect();
        CellGrid {
            rows,
            cells: per_row.concat(),
        }
    }

    pub fn rows(&self) -> u64 {
        self.rows
    }

    pub fn get(&self, n: u64, i: u64) -> bool {
        assert!(
            i <= n && n < self.rows,
            "cell ({n}, {i}) outside {} rows",
            self.rows
        );
        self.cells[row_start(n) + i as usize]
    }

    pub fn row(&self, n: u64) -> &[bool] {
        let start = row_start(n);
        &self.cells[start..=start + n as usize]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Cells set in either grid.
    pub fn union(&self, other: &CellGrid) -> CellGrid {
        assert_eq!(self.rows, other.rows, "grids differ in row count");
        CellGrid {
            rows: self.rows,
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| *a || *b)
                .collect(),
        }
    }

    pub fn complement(&self) -> CellGrid {
        CellGrid {
            rows: self.rows,
            cells: self.cells.iter().map(|c| !c).collect(),
        }
    }
}

/// Which triangle entries are nonzero modulo `m`. `true` renders black.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityMask {
    pub modulus: u64,
    pub grid: CellGrid,
}

impl DivisibilityMask {
    pub fn rows(&self) -> u64 {
        self.grid.rows()
    }

    pub fn nonzero(&self, n: u64, i: u64) -> bool {
        self.grid.get(n, i)
    }

    /// Boundary cells set and every row a palindrome.
    pub fn check_invariants(&self) -> bool {
        (0..self.rows()).all(|n| {
            let row = self.grid.row(n);
            row[0] && row[n as usize] && row.iter().eq(row.iter().rev())
        })
    }
}

/// How a prime-modulus mask is computed. All three must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MaskMethod {
    /// Reduce the additive recurrence rows mod `p`.
    Recurrence,
    /// `C(n, i)` is nonzero mod `p` iff `i + (n - i)` has no base-`p` carry.
    Kummer,
    /// Every base-`p` digit of `i` is at most that of `n`.
    #[default]
    DigitDomination,
}

impl MaskMethod {
    pub const ALL: [MaskMethod; 3] = [
        MaskMethod::Recurrence,
        MaskMethod::Kummer,
        MaskMethod::DigitDomination,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MaskMethod::Recurrence => "recurrence",
            MaskMethod::Kummer => "kummer",
            MaskMethod::DigitDomination => "digit-domination",
        }
    }
}

impl fmt::Display for MaskMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MaskMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recurrence" => Ok(MaskMethod::Recurrence),
            "kummer" => Ok(MaskMethod::Kummer),
            "digit-domination" | "lucas" => Ok(MaskMethod::DigitDomination),
            other => Err(Error::InvalidArgument(format!(
                "unknown mask method {other:?}"
            ))),
        }
    }
}

/// Nonzero pattern of the first `rows` rows modulo the prime `p`.
pub fn divisibility_mask(p: u64, rows: u64, method: MaskMethod) -> Result<DivisibilityMask> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if rows < 1 {
        return Err(Error::InvalidRowCount { min: 1, got: rows });
    }
    let grid = match method {
        MaskMethod::Recurrence => return recurrence_mask(p, rows),
        MaskMethod::Kummer => CellGrid::par_from_fn(rows, |n, i| {
            kummer_valuation(n, i, p).expect("prime checked, i ≤ n") == 0
        }),
        MaskMethod::DigitDomination => {
            CellGrid::par_from_fn(rows, |n, i| digits_dominated(i, n, p))
        }
    };
    Ok(DivisibilityMask { modulus: p, grid })
}

/// Nonzero pattern modulo any `m ≥ 2` from the additive recurrence.
pub fn recurrence_mask(modulus: u64, rows: u64) -> Result<DivisibilityMask> {
    let generated = generate_rows(modulus, rows)?;
    let grid = CellGrid::from_fn(rows, |n, i| generated[n as usize].get(i as usize) != 0);
    Ok(DivisibilityMask { modulus, grid })
}

/// Number of entries of row `n` not divisible by `p`: `Π (n_k + 1)` over the
/// base-`p` digits of `n`.
pub fn row_nonzero_count(n: u64, p: u64) -> Result<u128> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let len = to_digits(n, p)?.len();
    (0..len).try_fold(1u128, |acc, k| {
        Ok(acc * (u128::from(digit_at(n, p, k)?) + 1))
    })
}

/// Rows `n` in `[2, rows)` whose interior entries are all divisible by `p`.
pub fn all_interior_divisible_rows(p: u64, rows: u64) -> Result<BTreeSet<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if rows < 2 {
        return Err(Error::InvalidRowCount { min: 2, got: rows });
    }
    Ok((2..rows)
        .filter(|&n| (1..n).all(|i| !digits_dominated(i, n, p)))
        .collect())
}

/// `{p^k : k ≥ 1, p^k < bound}`.
pub fn prime_powers_below(p: u64, bound: u64) -> BTreeSet<u64> {
    std::iter::successors(Some(p), |&q| q.checked_mul(p))
        .take_while(|&q| q < bound)
        .collect()
}

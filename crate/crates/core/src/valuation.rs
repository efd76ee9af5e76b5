//! Factors of a prime in factorials and binomial coefficients.
//!
//! `v_p(n!)` is available three independent ways: a brute-force count over
//! `1..=n`, the sum `⌊n/p⌋ + ⌊n/p²⌋ + …`, and the digit-sum closed form
//! `(n - S_p(n)) / (p - 1)`. `v_p(C(n, i))` is the carry count of
//! `i + (n - i)` in base `p`, which must equal the difference of the factorial
//! valuations.
//!
//! Binomial coefficients themselves are never formed; divisibility by a
//! composite modulus is decided prime power by prime power.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::carries::add_with_trace;
use crate::digits::digit_sum;
use crate::{Error, Result};

/// Default upper bound on `n` for the brute-force factorial oracle.
pub const DEFAULT_ORACLE_CAP: u64 = 100_000;

/// Environment variable overriding [`DEFAULT_ORACLE_CAP`].
pub const ORACLE_CAP_ENV: &str = "KUMMER_ORACLE_CAP";

/// Reads the oracle cap from [`ORACLE_CAP_ENV`], falling back to the default
/// when the variable is unset.
pub fn oracle_cap_from_env() -> Result<u64> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("{ORACLE_CAP_ENV}={text:?} is not a natural number"))
        }),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn require_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Sieve of Eratosthenes: every prime `p ≤ limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let Ok(limit) = usize::try_from(limit) else {
        panic!("sieve limit {limit} exceeds the address space");
    };
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        primes.push(p as u64);
        let mut multiple = p.saturating_mul(p);
        while multiple <= limit {
            composite[multiple] = true;
            multiple += p;
        }
    }
    primes
}

/// Prime factorization `m = Π p^a` by trial division, primes ascending.
pub fn factorize(m: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut rest = m;
    let mut d = 2u64;
    while d <= rest / d {
        if rest.is_multiple_of(d) {
            let mut a = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                a += 1;
            }
            factors.push((d, a));
        }
        d += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    factors
}

/// `v_p(n!)` by dividing each of `1..=n` by `p` until it no longer divides.
///
/// Only for `n ≤ cap`; this is the independent oracle for the faster routes.
pub fn factorial_valuation_bruteforce(n: u64, p: u64, cap: u64) -> Result<u64> {
    require_prime(p)?;
    if n > cap {
        return Err(Error::AboveOracleCap { n, cap });
    }
    let mut total = 0;
    for mut k in 1..=n {
        while k % p == 0 {
            k /= p;
            total += 1;
        }
    }
    Ok(total)
}

/// `v_p(n!) = Σ_{t ≥ 1} ⌊n / p^t⌋`.
pub fn legendre_valuation(n: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    let mut total = 0;
    let mut power = p;
    while power <= n {
        total += n / power;
        match power.checked_mul(p) {
            Some(next) => power = next,
            None => break,
        }
    }
    Ok(total)
}

/// `v_p(n!) = (n - S_p(n)) / (p - 1)` where `S_p` is the base-`p` digit sum.
pub fn digit_sum_valuation(n: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    let s = digit_sum(n, p)?;
    let drop = n.checked_sub(s).ok_or_else(|| {
        Error::TheoremViolation(format!("digit sum {s} of {n} in base {p} exceeds {n}"))
    })?;
    if drop % (p - 1) != 0 {
        return Err(Error::TheoremViolation(format!(
            "{n} - S_{p}({n}) = {drop} is not divisible by {}",
            p - 1
        )));
    }
    Ok(drop / (p - 1))
}

/// `v_p(C(n, i))` as the number of carries in `i + (n - i)` written in base `p`.
pub fn kummer_valuation(n: u64, i: u64, p: u64) -> Result<u64> {
    if i > n {
        return Err(Error::IndexExceedsRow { n, i });
    }
    require_prime(p)?;
    Ok(add_with_trace(i, n - i, p)?.carry_count)
}

/// Valuations of the three factorials and of `C(n, i)` at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeValuations {
    pub n_factorial: u64,
    pub i_factorial: u64,
    pub j_factorial: u64,
    pub binomial: u64,
}

/// `C(n, i)` described by its valuation at every prime `p ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredValuations {
    pub n: u64,
    pub i: u64,
    pub j: u64,
    pub by_prime: BTreeMap<u64, PrimeValuations>,
}

impl FactoredValuations {
    /// `Π p^{v_p(C(n, i))}`, or `None` if it does not fit in a `u64`.
    pub fn binomial_value(&self) -> Option<u64> {
        self.by_prime.iter().try_fold(1u64, |acc, (&p, v)| {
            let exp = u32::try_from(v.binomial).ok()?;
            acc.checked_mul(p.checked_pow(exp)?)
        })
    }
}

/// Legendre valuations of `n!`, `i!`, `j!` and `C(n, i)` for all primes up to
/// `n`, found by sieve. Fails with a theorem violation if any binomial
/// valuation would be negative.
pub fn valuation_table(n: u64, i: u64, cap: u64) -> Result<FactoredValuations> {
    if i > n {
        return Err(Error::IndexExceedsRow { n, i });
    }
    if n > cap {
        return Err(Error::AboveOracleCap { n, cap });
    }
    let j = n - i;
    let mut by_prime = BTreeMap::new();
    for p in primes_up_to(n) {
        let n_factorial = legendre_valuation(n, p)?;
        let i_factorial = legendre_valuation(i, p)?;
        let j_factorial = legendre_valuation(j, p)?;
        let binomial = n_factorial
            .checked_sub(i_factorial + j_factorial)
            .ok_or_else(|| {
                Error::TheoremViolation(format!(
                    "v_{p}({n}!) = {n_factorial} < v_{p}({i}!) + v_{p}({j}!) = {}",
                    i_factorial + j_factorial
                ))
            })?;
        by_prime.insert(
            p,
            PrimeValuations {
                n_factorial,
                i_factorial,
                j_factorial,
                binomial,
            },
        );
    }
    Ok(FactoredValuations { n, i, j, by_prime })
}

/// Outcome for one prime power `p^a` exactly dividing the modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimePowerVerdict {
    pub prime: u64,
    pub exponent: u32,
    /// `v_p(C(n, i))` by carry counting.
    pub valuation: u64,
    pub divides: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityVerdict {
    pub n: u64,
    pub i: u64,
    pub modulus: u64,
    pub prime_powers: Vec<PrimePowerVerdict>,
    pub divisible: bool,
}

/// Decides `m | C(n, i)` by checking `v_p(C(n, i)) ≥ a` for every `p^a ∥ m`.
pub fn binomial_divisibility(n: u64, i: u64, m: u64) -> Result<DivisibilityVerdict> {
    if i > n {
        return Err(Error::IndexExceedsRow { n, i });
    }
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let prime_powers = factorize(m)
        .into_iter()
        .map(|(prime, exponent)| {
            let valuation = kummer_valuation(n, i, prime)?;
            Ok(PrimePowerVerdict {
                prime,
                exponent,
                valuation,
                divides: valuation >= u64::from(exponent),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let divisible = prime_powers.iter().all(|v| v.divides);
    Ok(DivisibilityVerdict {
        n,
        i,
        modulus: m,
        prime_powers,
        divisible,
    })
}

pub fn binomial_divisible_by(n: u64, i: u64, m: u64) -> Result<bool> {
    binomial_divisibility(n, i, m).map(|v| v.divisible)
}

//! Falsification harness: every cross-method identity swept over a grid of
//! inputs, with counterexamples collected instead of panics.
//!
//! Randomized sweeps draw from a ChaCha generator seeded by the caller, so a
//! report is a deterministic function of its [`VerifyConfig`] apart from the
//! optional timings.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::carries::{
    add_with_trace, carry_count_digit_formula, digit_sum_accounting, special_places,
    stopping_places,
};
use crate::digits::{digit_at, digit_sum, from_digits, to_digits};
use crate::render::{render_mask, special_union, Format, RenderSpec};
use crate::triangle::{
    all_interior_divisible_rows, digits_dominated, divisibility_mask, generate_rows,
    prime_powers_below, recurrence_mask, row_nonzero_count, MaskMethod,
};
use crate::valuation::{
    binomial_divisible_by, digit_sum_valuation, factorial_valuation_bruteforce, is_prime,
    kummer_valuation, legendre_valuation, primes_up_to, valuation_table, DEFAULT_ORACLE_CAP,
};
use crate::{Error, Result};

const RANDOM_SAMPLES: u64 = 10_000;
const COMPOSITE_MODULI: [u64; 5] = [4, 6, 8, 9, 12];
const DIVISIBILITY_MODULI: [u64; 9] = [2, 3, 4, 5, 6, 7, 8, 9, 12];
/// Counterexamples kept per property after sorting.
const MAX_REPORTED_FAILURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_n: u64,
    pub primes: Vec<u64>,
    pub rows: u64,
    pub seed: u64,
    pub oracle_cap: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 512,
            primes: vec![2, 3, 5, 7, 11, 13],
            rows: 200,
            seed: 0,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    /// Human-readable parameter ranges.
    pub sweep: String,
    pub declared_cases: u64,
    pub cases: u64,
    pub failure_count: u64,
    /// Sorted; at most [`MAX_REPORTED_FAILURES`] entries.
    pub failures: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.cases == self.declared_cases
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub max_n: u64,
    pub primes: Vec<u64>,
    pub rows: u64,
    pub seed: u64,
    pub properties: Vec<PropertyReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyReport::passed)
    }

    pub fn failed_properties(&self) -> impl Iterator<Item = &PropertyReport> {
        self.properties.iter().filter(|p| !p.passed())
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_text(&self, timings: bool) -> String {
        let primes: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        let mut out = format!(
            "verify: max_n={} primes={} rows={} seed={}\n",
            self.max_n,
            primes.join(","),
            self.rows,
            self.seed
        );
        for p in &self.properties {
            let status = if p.passed() { "PASS" } else { "FAIL" };
            let _ = write!(
                out,
                "{status} {:<40} cases={}/{} failures={}",
                p.name, p.cases, p.declared_cases, p.failure_count
            );
            if timings {
                let _ = write!(out, " elapsed={:.1}ms", p.elapsed.as_secs_f64() * 1e3);
            }
            let _ = writeln!(out, "  [{}]", p.sweep);
            for f in &p.failures {
                let _ = writeln!(out, "    counterexample: {f}");
            }
        }
        let failed = self.failed_properties().count();
        let _ = writeln!(
            out,
            "summary: {} properties, {failed} failed",
            self.properties.len()
        );
        out
    }

    pub fn to_json(&self, timings: bool) -> serde_json::Value {
        let mut doc = serde_json::to_value(self).expect("report serializes");
        doc["passed"] = serde_json::json!(self.passed());
        if timings {
            for (entry, p) in doc["properties"]
                .as_array_mut()
                .expect("properties array")
                .iter_mut()
                .zip(&self.properties)
            {
                entry["elapsed_ms"] = serde_json::json!(p.elapsed.as_secs_f64() * 1e3);
            }
        }
        doc
    }
}

/// Case counter and counterexample collector for one property.
struct Sweep {
    cases: u64,
    failures: Vec<String>,
}

impl Sweep {
    fn new() -> Self {
        Sweep {
            cases: 0,
            failures: Vec::new(),
        }
    }

    /// Records one case. `Ok(false)` and errors both count as failures.
    fn check(&mut self, outcome: Result<bool>, case: impl FnOnce() -> String) {
        self.cases += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(case()),
            Err(e) => self.failures.push(format!("{}: {e}", case())),
        }
    }

    fn merge(mut self, other: Sweep) -> Sweep {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self
    }
}

type PropertyFn = Box<dyn Fn() -> Sweep + Send + Sync>;

struct Property {
    name: &'static str,
    sweep: String,
    declared: u64,
    run: PropertyFn,
}

/// `Σ_{n=0}^{max_n} (n + 1)`: cells in rows `0..=max_n`.
fn triangle_cells(max_n: u64) -> u64 {
    (max_n + 1) * (max_n + 2) / 2
}

fn pairs_up_to(max_n: u64) -> impl ParallelIterator<Item = (u64, u64)> {
    (0..=max_n)
        .into_par_iter()
        .flat_map_iter(|n| (0..=n).map(move |i| (n, i)))
}

fn par_sweep<T: Send>(
    items: impl ParallelIterator<Item = T>,
    f: impl Fn(&mut Sweep, T) + Sync + Send,
) -> Sweep {
    items
        .fold(Sweep::new, |mut s, item| {
            f(&mut s, item);
            s
        })
        .reduce(Sweep::new, Sweep::merge)
}

fn validate(config: &VerifyConfig) -> Result<()> {
    if let Some(&p) = config.primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::NotPrime(p));
    }
    if config.primes.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one prime is required".into(),
        ));
    }
    if config.max_n > config.oracle_cap {
        return Err(Error::AboveOracleCap {
            n: config.max_n,
            cap: config.oracle_cap,
        });
    }
    if config.rows < 1 {
        return Err(Error::InvalidRowCount {
            min: 1,
            got: config.rows,
        });
    }
    Ok(())
}

/// Runs every property sweep. Properties execute concurrently; the report
/// lists them in a fixed order with sorted counterexamples.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    validate(config)?;
    let properties = properties(config);
    let properties = properties
        .par_iter()
        .map(|p| {
            let start = Instant::now();
            let Sweep {
                cases,
                mut failures,
            } = (p.run)();
            let elapsed = start.elapsed();
            failures.sort();
            let failure_count = failures.len() as u64;
            failures.truncate(MAX_REPORTED_FAILURES);
            PropertyReport {
                name: p.name,
                sweep: p.sweep.clone(),
                declared_cases: p.declared,
                cases,
                failure_count,
                failures,
                elapsed,
            }
        })
        .collect();
    Ok(VerifyReport {
        max_n: config.max_n,
        primes: config.primes.clone(),
        rows: config.rows,
        seed: config.seed,
        properties,
    })
}

fn properties(config: &VerifyConfig) -> Vec<Property> {
    let VerifyConfig {
        max_n,
        ref primes,
        rows,
        seed,
        oracle_cap,
    } = *config;
    let np = primes.len() as u64;
    let prime_list = primes
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let digit_samples: Vec<(u64, u64)> = (0..RANDOM_SAMPLES)
        .map(|_| (rng.gen_range(0..1u64 << 63), rng.gen_range(2..=1000)))
        .collect();
    let add_samples: Vec<(u64, u64, u64)> = (0..RANDOM_SAMPLES)
        .map(|_| {
            (
                rng.gen_range(0..1u64 << 62),
                rng.gen_range(0..1u64 << 62),
                rng.gen_range(2..=1000),
            )
        })
        .collect();

    let small_n = max_n.min(20);
    let div_n = max_n.min(200);
    let mut props: Vec<Property> = Vec::new();
    let mut add = |name, sweep: String, declared, run: PropertyFn| {
        props.push(Property {
            name,
            sweep,
            declared,
            run,
        })
    };

    let samples = digit_samples.clone();
    add(
        "digits.round_trip",
        format!("{RANDOM_SAMPLES} random (n < 2^63, b in [2, 1000])"),
        RANDOM_SAMPLES,
        Box::new(move || {
            let mut s = Sweep::new();
            for &(n, b) in &samples {
                s.check(
                    to_digits(n, b)
                        .and_then(|d| from_digits(b, d.digits()))
                        .map(|back| back == n),
                    || format!("(n={n}, b={b})"),
                );
            }
            s
        }),
    );

    let samples = digit_samples.clone();
    add(
        "digits.floor_formula",
        format!("{RANDOM_SAMPLES} random (n, b), k up to length + 2"),
        RANDOM_SAMPLES,
        Box::new(move || {
            let mut s = Sweep::new();
            for &(n, b) in &samples {
                let outcome = to_digits(n, b).and_then(|d| {
                    (0..d.len() + 3)
                        .try_fold(true, |ok, k| Ok(ok && digit_at(n, b, k)? == d.get(k)))
                });
                s.check(outcome, || format!("(n={n}, b={b})"));
            }
            s
        }),
    );

    let samples = digit_samples.clone();
    add(
        "digits.digit_sum_congruence",
        format!("{RANDOM_SAMPLES} random (n, b): S_b(n) = n mod (b - 1)"),
        RANDOM_SAMPLES,
        Box::new(move || {
            let mut s = Sweep::new();
            for &(n, b) in &samples {
                s.check(
                    digit_sum(n, b).map(|sum| sum % (b - 1) == n % (b - 1)),
                    || format!("(n={n}, b={b})"),
                );
            }
            s
        }),
    );

    let samples = digit_samples;
    add(
        "digits.canonical",
        format!("{RANDOM_SAMPLES} random (n, b): no high zero digit"),
        RANDOM_SAMPLES,
        Box::new(move || {
            let mut s = Sweep::new();
            for &(n, b) in &samples {
                s.check(
                    to_digits(n, b).map(|d| d.digits().last() != Some(&0)),
                    || format!("(n={n}, b={b})"),
                );
            }
            s
        }),
    );

    let samples = add_samples.clone();
    add(
        "carries.digit_formula_equivalence",
        format!("{RANDOM_SAMPLES} random (i, j < 2^62, b in [2, 1000])"),
        RANDOM_SAMPLES,
        Box::new(move || {
            let mut s = Sweep::new();
            for &(i, j, b) in &samples {
                let outcome = add_with_trace(i, j, b).and_then(|t| {
                    t.check_invariants()?;
                    Ok(carry_count_digit_formula(i, j, b)? == t.carry_count)
                });
                s.check(outcome, || format!("(i={i}, j={j}, b={b})"));
            }
            s
        }),
    );

    let samples = add_samples.clone();
    add(
        "carries.digit_sum_drop_nonnegative",
        format!("{RANDOM_SAMPLES} random (i, j, b): I + J - N >= 0 and divisible by b - 1"),
        RANDOM_SAMPLES,
        Box::new(move || {
            let mut s = Sweep::new();
            for &(i, j, b) in &samples {
                // digit_sum_accounting fails on a negative or indivisible drop.
                s.check(digit_sum_accounting(i, j, b).map(|_| true), || {
                    format!("(i={i}, j={j}, b={b})")
                });
            }
            s
        }),
    );

    let samples = add_samples;
    add(
        "carries.every_carry_stops",
        format!("{RANDOM_SAMPLES} random (i, j, b): carry runs = stopping places"),
        RANDOM_SAMPLES,
        Box::new(move || {
            let mut s = Sweep::new();
            for &(i, j, b) in &samples {
                let outcome = add_with_trace(i, j, b).and_then(|t| {
                    let stops = stopping_places(&t)?;
                    Ok(t.carry_runs().len() == stops.len() && t.carry_out.last() != Some(&true))
                });
                s.check(outcome, || format!("(i={i}, j={j}, b={b})"));
            }
            s
        }),
    );

    add(
        "carries.binary_stopping_digits",
        format!("0 <= i <= n <= {max_n}, base 2"),
        triangle_cells(max_n),
        Box::new(move || {
            par_sweep(pairs_up_to(max_n), |s, (n, i)| {
                // stopping_places checks the (0, 0, 1) column itself.
                s.check(
                    add_with_trace(i, n - i, 2)
                        .and_then(|t| stopping_places(&t))
                        .map(|_| true),
                    || format!("(n={n}, i={i})"),
                );
            })
        }),
    );

    add(
        "carries.special_equals_stopping",
        format!("0 <= i <= n <= {max_n}"),
        triangle_cells(max_n),
        Box::new(move || {
            par_sweep(pairs_up_to(max_n), |s, (n, i)| {
                let outcome = (|| -> Result<bool> {
                    let special = special_places(n, i)?;
                    let stops = stopping_places(&add_with_trace(i, n - i, 2)?)?;
                    Ok(special == stops)
                })();
                s.check(outcome, || format!("(n={n}, i={i})"));
            })
        }),
    );

    add(
        "carries.no_special_at_place_0",
        format!("0 <= i <= n <= {max_n}"),
        triangle_cells(max_n),
        Box::new(move || {
            par_sweep(pairs_up_to(max_n), |s, (n, i)| {
                s.check(special_places(n, i).map(|sp| !sp.contains(&0)), || {
                    format!("(n={n}, i={i})")
                });
            })
        }),
    );

    let ps = primes.clone();
    add(
        "valuation.factorial_triple_agreement",
        format!("n <= {max_n}, p in {{{prime_list}}}: brute force = Legendre = digit sum"),
        (max_n + 1) * np,
        Box::new(move || {
            let items: Vec<(u64, u64)> = ps
                .iter()
                .flat_map(|&p| (0..=max_n).map(move |n| (n, p)))
                .collect();
            par_sweep(items.into_par_iter(), |s, (n, p)| {
                let outcome = (|| -> Result<bool> {
                    let brute = factorial_valuation_bruteforce(n, p, oracle_cap)?;
                    Ok(brute == legendre_valuation(n, p)? && brute == digit_sum_valuation(n, p)?)
                })();
                s.check(outcome, || format!("(n={n}, p={p})"));
            })
        }),
    );

    let ps = primes.clone();
    add(
        "valuation.kummer_equivalence",
        format!(
            "0 <= i <= n <= {max_n}, p in {{{prime_list}}}: carries = v_p(n!) - v_p(i!) - v_p(j!)"
        ),
        triangle_cells(max_n) * np,
        Box::new(move || {
            ps.iter()
                .map(|&p| {
                    let legendre = match (0..=max_n)
                        .map(|n| legendre_valuation(n, p))
                        .collect::<Result<Vec<_>>>()
                    {
                        Ok(v) => v,
                        Err(e) => {
                            let mut s = Sweep::new();
                            s.check(Err(e), || format!("(p={p})"));
                            return s;
                        }
                    };
                    let legendre = &legendre;
                    par_sweep(pairs_up_to(max_n), move |s, (n, i)| {
                        let at = |k: u64| i128::from(legendre[k as usize]);
                        let expected = at(n) - at(i) - at(n - i);
                        s.check(
                            kummer_valuation(n, i, p).map(|c| i128::from(c) == expected),
                            || format!("(n={n}, i={i}, p={p})"),
                        );
                    })
                })
                .fold(Sweep::new(), Sweep::merge)
        }),
    );

    let all_primes = primes_up_to(max_n);
    let declared: u64 = (0..=max_n)
        .map(|n| (n + 1) * all_primes.partition_point(|&p| p <= n) as u64)
        .sum();
    add(
        "valuation.binomial_nonnegative",
        format!("0 <= i <= n <= {max_n}, every prime p <= n"),
        declared,
        Box::new(move || {
            let table: Vec<Vec<u64>> = all_primes
                .iter()
                .map(|&p| {
                    (0..=max_n)
                        .map(|n| legendre_valuation(n, p).expect("sieved primes are prime"))
                        .collect()
                })
                .collect();
            let all_primes = &all_primes;
            let table = &table;
            par_sweep(pairs_up_to(max_n), move |s, (n, i)| {
                let j = (n - i) as usize;
                for (idx, &p) in all_primes.iter().take_while(|&&p| p <= n).enumerate() {
                    let v = &table[idx];
                    let diff =
                        i128::from(v[n as usize]) - i128::from(v[i as usize]) - i128::from(v[j]);
                    s.check(Ok(diff >= 0), || format!("(n={n}, i={i}, p={p}): {diff}"));
                }
            })
        }),
    );

    add(
        "valuation.small_case_exactness",
        format!("0 <= i <= n <= {small_n}: product of prime powers = additive recurrence"),
        triangle_cells(small_n),
        Box::new(move || {
            let mut s = Sweep::new();
            let mut row = vec![1u64];
            for n in 0..=small_n {
                for (i, &c) in row.iter().enumerate() {
                    let i = i as u64;
                    s.check(
                        valuation_table(n, i, oracle_cap).map(|t| t.binomial_value() == Some(c)),
                        || format!("(n={n}, i={i})"),
                    );
                }
                let mut next = vec![1u64; row.len() + 1];
                for k in 1..row.len() {
                    next[k] = row[k - 1] + row[k];
                }
                row = next;
            }
            s
        }),
    );

    add(
        "valuation.composite_divisibility",
        format!("0 <= i <= n <= {div_n}, m in {DIVISIBILITY_MODULI:?}: Kummer verdict = recurrence residue"),
        triangle_cells(div_n) * DIVISIBILITY_MODULI.len() as u64,
        Box::new(move || {
            DIVISIBILITY_MODULI
                .par_iter()
                .map(|&m| {
                    let mut s = Sweep::new();
                    match generate_rows(m, div_n + 1) {
                        Ok(generated) => {
                            for r in &generated {
                                let n = r.index();
                                for (i, res) in r.iter().enumerate() {
                                    let i = i as u64;
                                    s.check(binomial_divisible_by(n, i, m).map(|d| d == (res == 0)), || {
                                        format!("(n={n}, i={i}, m={m})")
                                    });
                                }
                            }
                        }
                        Err(e) => s.check(Err(e), || format!("(m={m})")),
                    }
                    s
                })
                .reduce(Sweep::new, Sweep::merge)
        }),
    );

    let ps = primes.clone();
    add(
        "triangle.three_method_masks",
        format!("p in {{{prime_list}}}, R = {rows}: recurrence = kummer = digit-domination"),
        np,
        Box::new(move || {
            let mut s = Sweep::new();
            for &p in &ps {
                let outcome = (|| -> Result<bool> {
                    let reference = divisibility_mask(p, rows, MaskMethod::Recurrence)?;
                    Ok(divisibility_mask(p, rows, MaskMethod::Kummer)? == reference
                        && divisibility_mask(p, rows, MaskMethod::DigitDomination)? == reference)
                })();
                s.check(outcome, || format!("(p={p}, R={rows})"));
            }
            s
        }),
    );

    let similarity_cases: u64 = [2u64, 3]
        .iter()
        .flat_map(|&p| [1u32, 2].map(|k| triangle_cells(p.pow(k + 1) - 1)))
        .sum();
    add(
        "triangle.self_similarity",
        "p in {2,3}, k in {1,2}, 0 <= i <= n < p^(k+1)".to_string(),
        similarity_cases,
        Box::new(move || {
            let mut s = Sweep::new();
            for p in [2u64, 3] {
                for k in [1u32, 2] {
                    let block = p.pow(k);
                    let size = p.pow(k + 1);
                    let mask = match divisibility_mask(p, size, MaskMethod::Recurrence) {
                        Ok(m) => m,
                        Err(e) => {
                            s.check(Err(e), || format!("(p={p}, k={k})"));
                            continue;
                        }
                    };
                    for n in 0..size {
                        for i in 0..=n {
                            let (nl, il) = (n % block, i % block);
                            let low = il <= nl && digits_dominated(il, nl, p);
                            let high = mask.nonzero(n / block, i / block);
                            s.check(Ok(mask.nonzero(n, i) == (low && high)), || {
                                format!("(p={p}, k={k}, n={n}, i={i})")
                            });
                        }
                    }
                }
            }
            s
        }),
    );

    let ps = primes.clone();
    add(
        "triangle.row_nonzero_counts",
        format!("n <= {max_n}, p in {{{prime_list}}}: nonzero entries = product of (digit + 1)"),
        (max_n + 1) * np,
        Box::new(move || {
            let mut s = Sweep::new();
            for &p in &ps {
                let mask = match divisibility_mask(p, max_n + 1, MaskMethod::DigitDomination) {
                    Ok(m) => m,
                    Err(e) => {
                        s.check(Err(e), || format!("(p={p})"));
                        continue;
                    }
                };
                for n in 0..=max_n {
                    let direct = mask.grid.row(n).iter().filter(|&&c| c).count() as u128;
                    s.check(row_nonzero_count(n, p).map(|c| c == direct), || {
                        format!("(n={n}, p={p})")
                    });
                }
            }
            s
        }),
    );

    add(
        "triangle.cumulative_density",
        "p in {2,3,5}, k <= 5: nonzero cells in rows < p^k = (p(p+1)/2)^k".to_string(),
        18,
        Box::new(move || {
            let mut s = Sweep::new();
            for p in [2u64, 3, 5] {
                let grid = match divisibility_mask(p, p.pow(5), MaskMethod::DigitDomination) {
                    Ok(m) => m.grid,
                    Err(e) => {
                        s.check(Err(e), || format!("(p={p})"));
                        continue;
                    }
                };
                let mut count = 0u64;
                let mut next_row = 0u64;
                for k in 0..=5u32 {
                    while next_row < p.pow(k) {
                        count += grid.row(next_row).iter().filter(|&&c| c).count() as u64;
                        next_row += 1;
                    }
                    let expected = (p * (p + 1) / 2).pow(k);
                    s.check(Ok(count == expected), || {
                        format!("(p={p}, k={k}): {count} != {expected}")
                    });
                }
            }
            s
        }),
    );

    let ps = primes.clone();
    add(
        "triangle.interior_divisible_rows",
        format!(
            "p in {{{prime_list}}}, R = {rows}: rows with all-divisible interior = prime powers"
        ),
        if rows >= 2 { np } else { 0 },
        Box::new(move || {
            let mut s = Sweep::new();
            if rows < 2 {
                return s;
            }
            for &p in &ps {
                s.check(
                    all_interior_divisible_rows(p, rows)
                        .map(|found| found == prime_powers_below(p, rows)),
                    || format!("(p={p}, R={rows})"),
                );
            }
            s
        }),
    );

    let moduli: Vec<u64> = primes.iter().copied().chain(COMPOSITE_MODULI).collect();
    let nm = moduli.len() as u64;
    add(
        "triangle.row_and_mask_invariants",
        format!("m in primes and {COMPOSITE_MODULI:?}, R = {rows}: boundary and symmetry"),
        nm * (rows + 1),
        Box::new(move || {
            let mut s = Sweep::new();
            for &m in &moduli {
                match generate_rows(m, rows) {
                    Ok(generated) => {
                        for r in &generated {
                            s.check(Ok(r.check_invariants()), || {
                                format!("(m={m}, n={})", r.index())
                            });
                        }
                    }
                    Err(e) => s.check(Err(e), || format!("(m={m})")),
                }
                s.check(
                    recurrence_mask(m, rows).map(|mask| mask.check_invariants()),
                    || format!("(m={m}) mask"),
                );
            }
            s
        }),
    );

    add(
        "triangle.composite_masks",
        format!("m in {COMPOSITE_MODULI:?}, R = {rows}: recurrence mask = per-prime-power Kummer"),
        triangle_cells(rows - 1) * COMPOSITE_MODULI.len() as u64,
        Box::new(move || {
            COMPOSITE_MODULI
                .par_iter()
                .map(|&m| {
                    let mut s = Sweep::new();
                    match recurrence_mask(m, rows) {
                        Ok(mask) => {
                            for n in 0..rows {
                                for i in 0..=n {
                                    s.check(
                                        binomial_divisible_by(n, i, m)
                                            .map(|d| d != mask.nonzero(n, i)),
                                        || format!("(n={n}, i={i}, m={m})"),
                                    );
                                }
                            }
                        }
                        Err(e) => s.check(Err(e), || format!("(m={m})")),
                    }
                    s
                })
                .reduce(Sweep::new, Sweep::merge)
        }),
    );

    add(
        "render.stripe_union",
        format!("R = {rows}: union of special-place stripe survivors = even entries"),
        triangle_cells(rows - 1),
        Box::new(move || {
            let mut s = Sweep::new();
            let outcome = (|| -> Result<_> {
                Ok((
                    special_union(rows)?,
                    divisibility_mask(2, rows, MaskMethod::DigitDomination)?,
                ))
            })();
            match outcome {
                Ok((union, mask)) => {
                    for n in 0..rows {
                        for i in 0..=n {
                            s.check(Ok(union.get(n, i) == !mask.nonzero(n, i)), || {
                                format!("(n={n}, i={i})")
                            });
                        }
                    }
                }
                Err(e) => s.check(Err(e), || format!("(R={rows})")),
            }
            s
        }),
    );

    let ps = primes.clone();
    add(
        "render.pbm_determinism",
        format!("p in {{{prime_list}}}, R = {rows}: repeated renders are byte-identical"),
        np,
        Box::new(move || {
            let mut s = Sweep::new();
            let spec = RenderSpec::new(Format::Pbm).centered();
            for &p in &ps {
                let outcome = (|| -> Result<bool> {
                    let mask = divisibility_mask(p, rows, MaskMethod::DigitDomination)?;
                    Ok(render_mask(&mask, &spec)? == render_mask(&mask.clone(), &spec.clone())?)
                })();
                s.check(outcome, || format!("(p={p})"));
            }
            s
        }),
    );

    let ps = primes.clone();
    add(
        "render.alignment_consistency",
        format!("p in {{{prime_list}}}, R = {rows}: black cells per row independent of alignment"),
        np,
        Box::new(move || {
            let mut s = Sweep::new();
            for &p in &ps {
                let outcome = (|| -> Result<bool> {
                    let mask = divisibility_mask(p, rows, MaskMethod::DigitDomination)?;
                    let per_row = |spec: RenderSpec| -> Result<Vec<usize>> {
                        let bytes = render_mask(&mask, &spec)?;
                        let text = String::from_utf8(bytes).expect("plain pbm is ascii");
                        Ok(text
                            .lines()
                            .skip(2)
                            .map(|l| l.split(' ').filter(|&t| t == "1").count())
                            .collect())
                    };
                    Ok(per_row(RenderSpec::new(Format::Pbm))?
                        == per_row(RenderSpec::new(Format::Pbm).centered())?)
                })();
                s.check(outcome, || format!("(p={p})"));
            }
            s
        }),
    );

    props
}

/// Names of all properties in report order.
pub fn property_names() -> BTreeSet<&'static str> {
    properties(&VerifyConfig {
        max_n: 0,
        rows: 1,
        ..VerifyConfig::default()
    })
    .iter()
    .map(|p| p.name)
    .collect()
}

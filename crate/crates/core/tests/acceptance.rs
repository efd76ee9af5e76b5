//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kummer::carries::{add_with_trace, digit_sum_accounting};
use kummer::cli;
use kummer::digits::parse_natural;
use kummer::render::{render_mask, special_union, Format, RenderSpec};
use kummer::triangle::{
    all_interior_divisible_rows, divisibility_mask, recurrence_mask, row_nonzero_count, MaskMethod,
};
use kummer::valuation::{
    binomial_divisible_by, digit_sum_valuation, factorial_valuation_bruteforce, kummer_valuation,
    legendre_valuation, valuation_table, DEFAULT_ORACLE_CAP,
};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
const GOLDEN: &[u8] = include_bytes!("golden/pascal_mod2_32_centered.pbm");

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    check: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_cli(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kummer").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

fn cli_first_line(args: &[&str]) -> Result<String, String> {
    let (code, out, err) = run_cli(args);
    ensure(code == cli::EXIT_OK, || {
        format!("{args:?} exited {code}: {err}")
    })?;
    Ok(out.lines().next().unwrap_or_default().to_string())
}

fn base_conversion() -> Outcome {
    for (args, want) in [
        (["digits", "2932", "--base", "9"], "4017 (base 9)"),
        (["digits", "1892", "--base", "7"], "5342 (base 7)"),
    ] {
        let got = cli_first_line(&args)?;
        ensure(got == want, || {
            format!("{args:?} printed {got:?}, want {want:?}")
        })?;
    }
    Ok("4017 (base 9), 5342 (base 7)".into())
}

fn carry_bookkeeping() -> Outcome {
    let i = parse_natural("253", 7).map_err(|e| e.to_string())?;
    let j = parse_natural("415", 7).map_err(|e| e.to_string())?;
    let trace = add_with_trace(i, j, 7).map_err(|e| e.to_string())?;
    let sum = trace.sum_n.digit_string();
    ensure(sum == "1001" && trace.carry_count == 3, || {
        format!("sum {sum} with {} carries", trace.carry_count)
    })?;
    let acct = digit_sum_accounting(i, j, 7).map_err(|e| e.to_string())?;
    ensure(acct.decrease == 18 && acct.carries == 3, || {
        format!("{acct:?}")
    })?;
    let line = cli_first_line(&["add", "253", "415", "--base", "7", "--input-base", "7"])?;
    ensure(
        line == "253 (base 7) + 415 (base 7) = 1001 (base 7)",
        || format!("cli printed {line:?}"),
    )?;
    Ok(format!(
        "1001 (base 7), carries 3, decrease {} = 3 * 6",
        acct.decrease
    ))
}

fn factorial_valuations() -> Outcome {
    let mut parts = Vec::new();
    for (n, p, want) in [(132, 5, 32), (365, 7, 60)] {
        let brute =
            factorial_valuation_bruteforce(n, p, DEFAULT_ORACLE_CAP).map_err(|e| e.to_string())?;
        let legendre = legendre_valuation(n, p).map_err(|e| e.to_string())?;
        let digits = digit_sum_valuation(n, p).map_err(|e| e.to_string())?;
        ensure([brute, legendre, digits] == [want; 3], || {
            format!("v_{p}({n}!) brute {brute}, legendre {legendre}, digits {digits}; want {want}")
        })?;
        parts.push(format!("v_{p}({n}!) = {want}"));
    }
    Ok(parts.join(", "))
}

fn kummer_sweep() -> Outcome {
    let mut cases = 0u64;
    for p in PRIMES {
        let legendre: Vec<u64> = (0..=512)
            .map(|n| legendre_valuation(n, p).unwrap())
            .collect();
        for n in 0..=512u64 {
            for i in 0..=n {
                let carries = kummer_valuation(n, i, p).map_err(|e| e.to_string())?;
                let (vn, vi, vj) = (
                    legendre[n as usize],
                    legendre[i as usize],
                    legendre[(n - i) as usize],
                );
                ensure(vn >= vi + vj && carries == vn - vi - vj, || {
                    format!("p={p} n={n} i={i}: carries {carries}, legendre {vn} - {vi} - {vj}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, 0 failures"))
}

fn nonnegative_valuations() -> Outcome {
    let mut cases = 0u64;
    for n in 0..=512u64 {
        for i in 0..=n {
            let table = valuation_table(n, i, DEFAULT_ORACLE_CAP)
                .map_err(|e| format!("n={n} i={i}: {e}"))?;
            for p in PRIMES.into_iter().filter(|&p| p <= n) {
                let v = table.by_prime[&p];
                ensure(v.n_factorial >= v.i_factorial + v.j_factorial, || {
                    format!("p={p} n={n} i={i}: {v:?}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (n, i, p) cases, every valuation >= 0"))
}

fn digit_sum_sweep() -> Outcome {
    let mut cases = 0u64;
    for p in PRIMES {
        for n in 0..=2000u64 {
            let digits = digit_sum_valuation(n, p).map_err(|e| e.to_string())?;
            let legendre = legendre_valuation(n, p).map_err(|e| e.to_string())?;
            let brute = factorial_valuation_bruteforce(n, p, DEFAULT_ORACLE_CAP)
                .map_err(|e| e.to_string())?;
            ensure(digits == legendre && legendre == brute, || {
                format!("p={p} n={n}: digits {digits}, legendre {legendre}, brute {brute}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, 0 failures"))
}

fn figure_masks() -> Outcome {
    let spec = RenderSpec::new(Format::Pbm);
    for p in [2, 3, 5, 7] {
        let mut images = Vec::new();
        for method in MaskMethod::ALL {
            let mask = divisibility_mask(p, 200, method).map_err(|e| e.to_string())?;
            images.push((
                method,
                render_mask(&mask, &spec).map_err(|e| e.to_string())?,
            ));
        }
        let (first, reference) = &images[0];
        for (method, image) in &images[1..] {
            ensure(image == reference, || {
                format!("p={p}: {method} differs from {first}")
            })?;
        }
    }
    Ok("p = 2, 3, 5, 7 at 200 rows: recurrence, kummer, digit-domination identical".into())
}

fn white_triangles() -> Outcome {
    let rows = all_interior_divisible_rows(7, 200).map_err(|e| e.to_string())?;
    ensure(rows == BTreeSet::from([7, 49]), || format!("got {rows:?}"))?;
    Ok("{7, 49}".into())
}

fn fractal_counts() -> Outcome {
    let mut checks = Vec::new();
    for (p, max_k) in [(2u64, 5u32), (3, 3), (5, 3)] {
        let mask = divisibility_mask(p, p.pow(max_k), MaskMethod::DigitDomination)
            .map_err(|e| e.to_string())?;
        let per_triangle = p * (p + 1) / 2;
        for k in 0..=max_k {
            let bound = p.pow(k);
            let direct = (0..bound)
                .map(|n| (0..=n).filter(|&i| mask.nonzero(n, i)).count() as u64)
                .sum::<u64>();
            let closed: u128 = (0..bound).map(|n| row_nonzero_count(n, p).unwrap()).sum();
            let want = per_triangle.pow(k);
            ensure(direct == want && closed == u128::from(want), || {
                format!("p={p} k={k}: direct {direct}, row products {closed}, want {want}")
            })?;
        }
        checks.push(format!(
            "p={p}: {}^{max_k} = {}",
            per_triangle,
            per_triangle.pow(max_k)
        ));
    }
    Ok(checks.join(", "))
}

fn stripe_union() -> Outcome {
    let union = special_union(64).map_err(|e| e.to_string())?;
    let white = divisibility_mask(2, 64, MaskMethod::DigitDomination)
        .map_err(|e| e.to_string())?
        .grid
        .complement();
    ensure(union == white, || "union differs from white cells".into())?;
    Ok(format!("{} white cells at 64 rows", white.count()))
}

fn golden_image() -> Outcome {
    let mask = divisibility_mask(2, 32, MaskMethod::DigitDomination).map_err(|e| e.to_string())?;
    let fresh =
        render_mask(&mask, &RenderSpec::new(Format::Pbm).centered()).map_err(|e| e.to_string())?;
    ensure(fresh == GOLDEN, || {
        format!(
            "library output ({} bytes) differs from golden ({} bytes)",
            fresh.len(),
            GOLDEN.len()
        )
    })?;
    let (code, out, err) = run_cli(&[
        "render",
        "--mod",
        "2",
        "--rows",
        "32",
        "--format",
        "pbm",
        "--centered",
    ]);
    ensure(code == cli::EXIT_OK && out.as_bytes() == GOLDEN, || {
        format!("cli output differs (exit {code}) {err}")
    })?;
    Ok(format!("{} bytes match", GOLDEN.len()))
}

fn composite_divisibility() -> Outcome {
    for (m, want) in [("6", "true"), ("4", "false")] {
        let (code, out, err) = run_cli(&["divisible", "4", "2", "--mod", m]);
        ensure(code == cli::EXIT_OK, || format!("exit {code}: {err}"))?;
        let last = out.lines().last().unwrap_or_default();
        ensure(last == format!("divisible: {want}"), || {
            format!("--mod {m} printed {last:?}")
        })?;
    }
    let mut cases = 0u64;
    for m in [4, 6, 8, 9, 12] {
        let mask = recurrence_mask(m, 200).map_err(|e| e.to_string())?;
        for n in 0..200u64 {
            for i in 0..=n {
                let divisible = binomial_divisible_by(n, i, m).map_err(|e| e.to_string())?;
                ensure(mask.nonzero(n, i) != divisible, || {
                    format!("m={m} n={n} i={i}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("C(4,2) = 6; {cases} mask cells agree"))
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let criteria = [
        Criterion {
            id: 1,
            title: "base-conversion fidelity",
            budget: Some(ms(1)),
            check: base_conversion,
        },
        Criterion {
            id: 2,
            title: "carry bookkeeping",
            budget: Some(ms(1)),
            check: carry_bookkeeping,
        },
        Criterion {
            id: 3,
            title: "factorial valuations",
            budget: Some(ms(10)),
            check: factorial_valuations,
        },
        Criterion {
            id: 4,
            title: "carry count equals valuation difference",
            budget: Some(ms(10_000)),
            check: kummer_sweep,
        },
        Criterion {
            id: 5,
            title: "binomial valuations nonnegative",
            budget: None,
            check: nonnegative_valuations,
        },
        Criterion {
            id: 6,
            title: "digit-sum valuation sweep",
            budget: Some(ms(5_000)),
            check: digit_sum_sweep,
        },
        Criterion {
            id: 7,
            title: "three-method figure masks",
            budget: None,
            check: figure_masks,
        },
        Criterion {
            id: 8,
            title: "next white triangle rows",
            budget: None,
            check: white_triangles,
        },
        Criterion {
            id: 9,
            title: "fractal cell counts",
            budget: Some(ms(1_000)),
            check: fractal_counts,
        },
        Criterion {
            id: 10,
            title: "stripe union equals white cells",
            budget: None,
            check: stripe_union,
        },
        Criterion {
            id: 11,
            title: "golden mod-2 image",
            budget: None,
            check: golden_image,
        },
        Criterion {
            id: 12,
            title: "composite divisibility",
            budget: None,
            check: composite_divisibility,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, c.budget) {
            (Ok(_), Some(budget)) if elapsed > budget => {
                Err(format!("took {elapsed:.2?}, budget {budget:?}"))
            }
            (r, _) => r,
        };
        let budget = c.budget.map(|b| format!(" / {b:?}")).unwrap_or_default();
        match result {
            Ok(detail) => println!(
                "[PASS] {:>2} {} ({elapsed:.2?}{budget}): {detail}",
                c.id, c.title
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "[FAIL] {:>2} {} ({elapsed:.2?}{budget}): {detail}",
                    c.id, c.title
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

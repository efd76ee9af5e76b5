//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on usage or input errors, 2 when an identity
//! fails (a theorem violation or a failed `verify`).

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::carries::{add_with_trace, digit_sum_accounting, stopping_places};
use crate::digits::{parse_natural, to_digits};
use crate::render::{
    emit, render_mask, render_residues, render_stripes, Alignment, Destination, Format, RenderSpec,
    StripeLayer,
};
use crate::triangle::{
    divisibility_mask, entry_mod_prime, generate_rows, recurrence_mask, MaskMethod, TriangleRow,
};
use crate::valuation::{
    binomial_divisibility, digit_sum_valuation, factorial_valuation_bruteforce, is_prime,
    kummer_valuation, legendre_valuation, oracle_cap_from_env,
};
use crate::verify::{run_verify, VerifyConfig};
use crate::{Error, Result};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FALSIFIED: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "kummer",
    version,
    about = "Digit arithmetic, carries and Pascal's triangle modulo m"
)]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Read positional numbers in this base instead of base 10.
    #[arg(long, global = true, value_name = "B")]
    input_base: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Show the base-b digits of n.
    Digits {
        n: String,
        #[arg(long)]
        base: u64,
    },
    /// Add two numbers in base b, counting carries.
    Add {
        i: String,
        j: String,
        #[arg(long)]
        base: u64,
        /// Print the column-addition diagram and digit-sum accounting.
        #[arg(long)]
        trace: bool,
    },
    /// Factors of a prime in factorials and binomial coefficients.
    Valuation {
        #[command(subcommand)]
        kind: ValuationCommand,
    },
    /// Decide whether m divides C(n, i), prime power by prime power.
    Divisible {
        n: String,
        i: String,
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
    },
    /// Print rows of Pascal's triangle modulo m.
    Triangle {
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
        #[arg(long)]
        rows: u64,
        #[arg(long, value_enum, default_value_t = TriangleMethod::Recurrence)]
        method: TriangleMethod,
        #[arg(long, value_enum, default_value_t = TriangleFormat::Ascii)]
        format: TriangleFormat,
    },
    /// Render the divisibility mask or residues as an image or text.
    Render {
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
        #[arg(long)]
        rows: u64,
        #[arg(long, value_enum)]
        format: FormatArg,
        #[arg(long)]
        centered: bool,
        #[arg(long, default_value_t = 1)]
        scale: usize,
        /// Mask method for prime moduli; composite moduli always use the recurrence.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the stripes that eliminate non-special cells at a binary place.
    Stripes {
        #[arg(long)]
        place: usize,
        #[arg(long)]
        rows: u64,
        #[arg(long, value_delimiter = ',', default_value = "intersection")]
        layers: Vec<String>,
        #[arg(long, value_enum, default_value_t = FormatArg::Pbm)]
        format: FormatArg,
        #[arg(long)]
        centered: bool,
        #[arg(long, default_value_t = 1)]
        scale: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep every cross-method identity and report counterexamples.
    Verify {
        #[arg(long, default_value_t = 512)]
        max_n: u64,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11,13")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 200)]
        rows: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        oracle_cap: Option<u64>,
        /// Include per-property elapsed times (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Debug, Subcommand)]
enum ValuationCommand {
    /// v_p(n!) by brute force, Legendre's sum, or the digit-sum formula.
    Factorial {
        n: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum, default_value_t = FactorialMethod::All)]
        method: FactorialMethod,
        #[arg(long)]
        oracle_cap: Option<u64>,
    },
    /// v_p(C(n, i)) by carry counting and by Legendre differences.
    Binomial {
        n: String,
        i: String,
        #[arg(long)]
        prime: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FactorialMethod {
    Brute,
    Legendre,
    Digits,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TriangleMethod {
    Recurrence,
    Kummer,
    Lucas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TriangleFormat {
    Ascii,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Pbm,
    PbmRaw,
    Pgm,
    Ppm,
    Ascii,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Pbm => Format::Pbm,
            FormatArg::PbmRaw => Format::PbmRaw,
            FormatArg::Pgm => Format::Pgm,
            FormatArg::Ppm => Format::Ppm,
            FormatArg::Ascii => Format::Ascii,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Recurrence,
    Kummer,
    #[value(alias = "lucas")]
    DigitDomination,
}

impl From<MethodArg> for MaskMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Recurrence => MaskMethod::Recurrence,
            MethodArg::Kummer => MaskMethod::Kummer,
            MethodArg::DigitDomination => MaskMethod::DigitDomination,
        }
    }
}

/// Result of a subcommand that ran to completion.
enum Outcome {
    Ok,
    /// An identity failed; the details have already been printed.
    Falsified,
}

struct Context<'a> {
    json: bool,
    input_base: Option<u64>,
    out: &'a mut dyn Write,
}

impl Context<'_> {
    fn number(&self, text: &str) -> Result<u64> {
        match self.input_base {
            Some(b) => parse_natural(text, b),
            None => text.parse().map_err(|_| Error::Parse {
                input: text.to_string(),
                base: 10,
            }),
        }
    }

    fn print(&mut self, text: &str) -> Result<()> {
        self.out.write_all(text.as_bytes()).map_err(stdout_error)
    }

    fn print_json(&mut self, value: &serde_json::Value) -> Result<()> {
        let text = serde_json::to_string_pretty(value).expect("json values serialize");
        self.print(&format!("{text}\n"))
    }
}

fn stdout_error(source: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut ctx = Context {
        json: cli.json,
        input_base: cli.input_base,
        out,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Falsified) => EXIT_FALSIFIED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_theorem_violation() {
                EXIT_FALSIFIED
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(command: Command, ctx: &mut Context<'_>) -> Result<Outcome> {
    match command {
        Command::Digits { n, base } => digits_cmd(ctx, &n, base),
        Command::Add { i, j, base, trace } => add_cmd(ctx, &i, &j, base, trace),
        Command::Valuation {
            kind:
                ValuationCommand::Factorial {
                    n,
                    prime,
                    method,
                    oracle_cap,
                },
        } => factorial_cmd(ctx, &n, prime, method, oracle_cap),
        Command::Valuation {
            kind: ValuationCommand::Binomial { n, i, prime },
        } => binomial_cmd(ctx, &n, &i, prime),
        Command::Divisible { n, i, modulus } => divisible_cmd(ctx, &n, &i, modulus),
        Command::Triangle {
            modulus,
            rows,
            method,
            format,
        } => triangle_cmd(ctx, modulus, rows, method, format),
        Command::Render {
            modulus,
            rows,
            format,
            centered,
            scale,
            method,
            out,
        } => {
            let spec = render_spec(ctx, format, centered, scale, out)?;
            render_cmd(ctx, modulus, rows, method, spec)
        }
        Command::Stripes {
            place,
            rows,
            layers,
            format,
            centered,
            scale,
            out,
        } => {
            let spec = render_spec(ctx, format, centered, scale, out)?;
            let layers = layers
                .iter()
                .filter(|l| !l.is_empty())
                .map(|l| l.parse())
                .collect::<Result<BTreeSet<StripeLayer>>>()?;
            let bytes = render_stripes(place, rows, &layers, &spec)?;
            write_rendered(ctx, &bytes, &spec)
        }
        Command::Verify {
            max_n,
            primes,
            rows,
            seed,
            oracle_cap,
            timings,
        } => {
            let config = VerifyConfig {
                max_n,
                primes,
                rows,
                seed,
                oracle_cap: resolve_cap(oracle_cap)?,
            };
            let report = run_verify(&config)?;
            if ctx.json {
                ctx.print_json(&report.to_json(timings))?;
            } else {
                ctx.print(&report.to_text(timings))?;
            }
            Ok(if report.passed() {
                Outcome::Ok
            } else {
                Outcome::Falsified
            })
        }
    }
}

fn resolve_cap(flag: Option<u64>) -> Result<u64> {
    match flag {
        Some(cap) => Ok(cap),
        None => oracle_cap_from_env(),
    }
}

fn digits_cmd(ctx: &mut Context<'_>, n: &str, base: u64) -> Result<Outcome> {
    let n = ctx.number(n)?;
    let digits = to_digits(n, base)?;
    let sum = digits.digit_sum();
    if ctx.json {
        ctx.print_json(&json!({
            "value": n,
            "base": base,
            "digits": digits.digits(),
            "display": digits.to_string(),
            "digit_sum": sum,
        }))?;
    } else {
        ctx.print(&format!(
            "{digits}\ndigits (little-endian): {:?}\ndigit sum: {sum}\n",
            digits.digits()
        ))?;
    }
    Ok(Outcome::Ok)
}

fn add_cmd(
    ctx: &mut Context<'_>,
    i: &str,
    j: &str,
    base: u64,
    show_trace: bool,
) -> Result<Outcome> {
    let (i, j) = (ctx.number(i)?, ctx.number(j)?);
    let trace = add_with_trace(i, j, base)?;
    let accounting = digit_sum_accounting(i, j, base)?;
    let stops = stopping_places(&trace)?;
    if accounting.carries != trace.carry_count {
        return Err(Error::TheoremViolation(format!(
            "digit-sum formula gives {} carries, column addition {}",
            accounting.carries, trace.carry_count
        )));
    }
    if ctx.json {
        ctx.print_json(&json!({
            "i": i,
            "j": j,
            "n": trace.sum_n.value(),
            "base": base,
            "sum": trace.sum_n.to_string(),
            "carry_count": trace.carry_count,
            "stopping_places": stops,
            "accounting": accounting,
            "trace": trace,
        }))?;
        return Ok(Outcome::Ok);
    }
    let mut text = format!(
        "{} + {} = {}\ncarries: {}\n",
        trace.addend_i, trace.addend_j, trace.sum_n, trace.carry_count
    );
    if show_trace {
        text.push('\n');
        text.push_str(&trace.diagram());
        text.push_str(&format!("stopping places: {stops:?}\n"));
        text.push_str(&format!(
            "c = (I+J-N)/(b-1) = ({}+{}-{})/{} = {}/{} = {}\n",
            accounting.i_sum,
            accounting.j_sum,
            accounting.n_sum,
            base - 1,
            accounting.decrease,
            base - 1,
            accounting.carries
        ));
    }
    ctx.print(&text)?;
    Ok(Outcome::Ok)
}

fn factorial_cmd(
    ctx: &mut Context<'_>,
    n: &str,
    p: u64,
    method: FactorialMethod,
    cap: Option<u64>,
) -> Result<Outcome> {
    let n = ctx.number(n)?;
    let mut results: Vec<(&str, u64)> = Vec::new();
    if matches!(method, FactorialMethod::Brute | FactorialMethod::All) {
        results.push((
            "brute",
            factorial_valuation_bruteforce(n, p, resolve_cap(cap)?)?,
        ));
    }
    if matches!(method, FactorialMethod::Legendre | FactorialMethod::All) {
        results.push(("legendre", legendre_valuation(n, p)?));
    }
    if matches!(method, FactorialMethod::Digits | FactorialMethod::All) {
        results.push(("digits", digit_sum_valuation(n, p)?));
    }
    let agree = results.windows(2).all(|w| w[0].1 == w[1].1);
    if ctx.json {
        let mut doc = json!({ "n": n, "prime": p, "agree": agree });
        for &(name, v) in &results {
            doc[name] = json!(v);
        }
        ctx.print_json(&doc)?;
    } else {
        let mut text = String::new();
        for &(name, v) in &results {
            let label = match name {
                "brute" => "brute force",
                "legendre" => "legendre",
                _ => "digit sum",
            };
            text.push_str(&format!("v_{p}({n}!) {label:<12} {v}\n"));
        }
        if results.len() > 1 {
            if agree {
                text.push_str(&format!(
                    "all {} methods agree: {}\n",
                    results.len(),
                    results[0].1
                ));
            } else {
                text.push_str("methods DISAGREE\n");
            }
        }
        ctx.print(&text)?;
    }
    Ok(if agree {
        Outcome::Ok
    } else {
        Outcome::Falsified
    })
}

fn binomial_cmd(ctx: &mut Context<'_>, n: &str, i: &str, p: u64) -> Result<Outcome> {
    let (n, i) = (ctx.number(n)?, ctx.number(i)?);
    let carries = kummer_valuation(n, i, p)?;
    let j = n - i;
    let (vn, vi, vj) = (
        legendre_valuation(n, p)?,
        legendre_valuation(i, p)?,
        legendre_valuation(j, p)?,
    );
    let difference = i128::from(vn) - i128::from(vi) - i128::from(vj);
    let agree = difference == i128::from(carries);
    let trace = add_with_trace(i, j, p)?;
    if ctx.json {
        ctx.print_json(&json!({
            "n": n,
            "i": i,
            "j": j,
            "prime": p,
            "carries": carries,
            "legendre": {
                "n_factorial": vn,
                "i_factorial": vi,
                "j_factorial": vj,
                "difference": difference,
            },
            "agree": agree,
            "trace": trace,
        }))?;
    } else {
        let mut text = format!("v_{p}(C({n}, {i})) with j = {j}\n");
        text.push_str(&format!("carries in {i} + {j} (base {p}): {carries}\n"));
        text.push_str(&format!(
            "legendre: v({n}!) - v({i}!) - v({j}!) = {vn} - {vi} - {vj} = {difference}\n"
        ));
        text.push_str(if agree { "agree\n\n" } else { "DISAGREE\n\n" });
        text.push_str(&trace.diagram());
        ctx.print(&text)?;
    }
    Ok(if agree {
        Outcome::Ok
    } else {
        Outcome::Falsified
    })
}

fn divisible_cmd(ctx: &mut Context<'_>, n: &str, i: &str, m: u64) -> Result<Outcome> {
    let (n, i) = (ctx.number(n)?, ctx.number(i)?);
    let verdict = binomial_divisibility(n, i, m)?;
    if ctx.json {
        ctx.print_json(&serde_json::to_value(&verdict).expect("verdict serializes"))?;
    } else {
        let mut text = format!("{m} | C({n}, {i})?\n");
        for v in &verdict.prime_powers {
            let rel = if v.divides { ">=" } else { "<" };
            text.push_str(&format!(
                "  {}^{}: v_{} = {} {rel} {}  {}\n",
                v.prime,
                v.exponent,
                v.prime,
                v.valuation,
                v.exponent,
                if v.divides {
                    "divides"
                } else {
                    "does not divide"
                }
            ));
        }
        text.push_str(&format!("divisible: {}\n", verdict.divisible));
        ctx.print(&text)?;
    }
    Ok(Outcome::Ok)
}

fn triangle_cmd(
    ctx: &mut Context<'_>,
    modulus: u64,
    rows: u64,
    method: TriangleMethod,
    format: TriangleFormat,
) -> Result<Outcome> {
    let generated: Vec<TriangleRow> = match method {
        TriangleMethod::Recurrence => generate_rows(modulus, rows)?,
        TriangleMethod::Lucas => {
            per_cell_rows(modulus, rows, |n, i| entry_mod_prime(n, i, modulus))?
        }
        // Kummer decides divisibility only: 1 marks a nonzero entry.
        TriangleMethod::Kummer => per_cell_rows(modulus, rows, |n, i| {
            kummer_valuation(n, i, modulus).map(|v| u64::from(v == 0))
        })?,
    };
    let json = ctx.json || format == TriangleFormat::Json;
    let spec = RenderSpec::new(if json { Format::Json } else { Format::Ascii }).centered();
    let bytes = render_residues(&generated, &spec)?;
    ctx.print(std::str::from_utf8(&bytes).expect("text formats are utf-8"))?;
    Ok(Outcome::Ok)
}

fn per_cell_rows(
    modulus: u64,
    rows: u64,
    f: impl Fn(u64, u64) -> Result<u64>,
) -> Result<Vec<TriangleRow>> {
    if !is_prime(modulus) {
        return Err(Error::NotPrime(modulus));
    }
    if rows < 1 {
        return Err(Error::InvalidRowCount { min: 1, got: rows });
    }
    (0..rows)
        .map(|n| {
            let entries = (0..=n).map(|i| f(n, i)).collect::<Result<Vec<_>>>()?;
            TriangleRow::from_entries(modulus, n, &entries)
        })
        .collect()
}

fn render_spec(
    ctx: &Context<'_>,
    format: FormatArg,
    centered: bool,
    scale: usize,
    out: Option<PathBuf>,
) -> Result<RenderSpec> {
    // --json without --out asks for JSON on stdout.
    let format = if ctx.json && out.is_none() {
        Format::Json
    } else {
        format.into()
    };
    let alignment = if centered {
        Alignment::Centered
    } else {
        Alignment::Left
    };
    let destination = out.map_or(Destination::Stdout, Destination::File);
    Ok(RenderSpec::new(format)
        .with_alignment(alignment)
        .with_scale(scale)?
        .with_destination(destination))
}

fn render_cmd(
    ctx: &mut Context<'_>,
    modulus: u64,
    rows: u64,
    method: Option<MethodArg>,
    spec: RenderSpec,
) -> Result<Outcome> {
    let bytes = match spec.format {
        Format::Pgm | Format::Ppm => render_residues(&generate_rows(modulus, rows)?, &spec)?,
        _ => {
            let mask = if is_prime(modulus) {
                divisibility_mask(
                    modulus,
                    rows,
                    method.map(MaskMethod::from).unwrap_or_default(),
                )?
            } else {
                if matches!(method, Some(m) if m != MethodArg::Recurrence) {
                    return Err(Error::InvalidArgument(format!(
                        "modulus {modulus} is composite; only --method recurrence applies"
                    )));
                }
                recurrence_mask(modulus, rows)?
            };
            render_mask(&mask, &spec)?
        }
    };
    write_rendered(ctx, &bytes, &spec)
}

fn write_rendered(ctx: &mut Context<'_>, bytes: &[u8], spec: &RenderSpec) -> Result<Outcome> {
    emit(bytes, &spec.destination, ctx.out)?;
    if let Destination::File(path) = &spec.destination {
        if ctx.json {
            ctx.print_json(&json!({ "path": path, "bytes": bytes.len() }))?;
        } else {
            ctx.print(&format!(
                "wrote {} bytes to {}\n",
                bytes.len(),
                path.display()
            ))?;
        }
    }
    Ok(Outcome::Ok)
}

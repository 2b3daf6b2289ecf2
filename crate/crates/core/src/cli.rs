//! The `bvtn` command line.
//!
//! Exit status is 0 on success, 1 when a library operation fails and 2 when
//! the input is malformed (bad flags, unreadable or unparsable files).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::algebra::{expand, solve_system};
use crate::bd::{compute_bd, compute_bd_rounded, BdMatrix};
use crate::error::Error;
use crate::matrix::DenseMatrix;
use crate::nodes::{validate_nodes, BasisDegree};
use crate::repro::{self, Example, ReproReport};
use crate::scalar::rational_to_f64;
use crate::spectral::{self, LsqSolution, PrecisionPolicy, QrResult, Spectrum};

#[derive(Parser, Debug)]
#[command(
    name = "bvtn",
    version,
    about = "Accurate computations with Bernstein–Vandermonde matrices"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// First working precision of the adaptive kernels, in bits.
    #[arg(long, global = true)]
    start_bits: Option<u32>,
    /// Largest working precision; overrides BVTN_MAX_BITS.
    #[arg(long, global = true)]
    max_bits: Option<u32>,
    /// Relative agreement required between successive precisions.
    #[arg(long, global = true)]
    rtol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct NodeInput {
    /// File of whitespace-separated nodes, as decimals or p/q rationals.
    #[arg(long)]
    nodes: PathBuf,
    /// Basis degree n (at most the number of nodes minus one).
    #[arg(long)]
    degree: usize,
    /// Compute BD(A) from the exact nodes and round each entry once,
    /// instead of rounding the nodes first.
    #[arg(long)]
    exact_nodes: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the bidiagonal decomposition BD(A).
    Bd(NodeInput),
    /// Print A itself, from nodes or from a `bd --format json` file.
    Expand {
        #[arg(long, conflicts_with_all = ["nodes", "degree"])]
        bd: Option<PathBuf>,
        #[arg(long, requires = "degree")]
        nodes: Option<PathBuf>,
        #[arg(long, requires = "nodes")]
        degree: Option<usize>,
        #[arg(long)]
        exact_nodes: bool,
    },
    /// Solve A x = b for square A.
    Solve {
        #[command(flatten)]
        input: NodeInput,
        /// Right-hand side: a file, or the values inline.
        #[arg(long)]
        rhs: String,
    },
    /// Eigenvalues of square A.
    Eig(NodeInput),
    /// Singular values of A.
    Svd(NodeInput),
    /// QR factorization of A.
    Qr(NodeInput),
    /// Least-squares fit min ‖A c - f‖₂ for rows > cols.
    Lsq {
        #[command(flatten)]
        input: NodeInput,
        /// Data vector f of length rows: a file, or the values inline.
        #[arg(long)]
        rhs: String,
    },
    /// Regenerate one of the reference error tables.
    Repro {
        /// `example5.1` (eigenvalues) or `example5.2` (singular values).
        example: Example,
    },
}

enum Failure {
    Input(String),
    Module(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "bvtn: {msg}");
            2
        }
        Err(Failure::Module(e)) => {
            let _ = writeln!(err, "bvtn: {e}");
            1
        }
        // A reader such as `head` closed the pipe early.
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "bvtn: {e}");
            1
        }
    }
}

fn policy(cli: &Cli) -> std::result::Result<PrecisionPolicy, Failure> {
    let mut p = PrecisionPolicy::default().with_env_overrides();
    if let Some(b) = cli.start_bits {
        p.start_bits = b;
    }
    if let Some(b) = cli.max_bits {
        p.max_bits = b;
    }
    if let Some(r) = cli.rtol {
        p.stabilization_rtol = r;
    }
    p.validate().map_err(|e| Failure::Input(e.to_string()))?;
    Ok(p)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Bd(input) => {
            let bd = load_bd(input)?;
            match fmt {
                Format::Json => write_json(out, &bd),
                _ => write_matrix(out, fmt, bd.entries()),
            }
        }
        Command::Expand {
            bd,
            nodes,
            degree,
            exact_nodes,
        } => {
            let bd = match (bd, nodes, degree) {
                (Some(path), _, _) => {
                    let text = read(path)?;
                    let raw: BdMatrix<f64> = serde_json::from_str(&text)
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    BdMatrix::checked(raw.into_entries())?
                }
                (None, Some(nodes), Some(degree)) => load_bd(&NodeInput {
                    nodes: nodes.clone(),
                    degree: *degree,
                    exact_nodes: *exact_nodes,
                })?,
                _ => {
                    return Err(Failure::Input(
                        "expand needs --bd FILE or --nodes FILE --degree N".into(),
                    ))
                }
            };
            let a = expand(&bd);
            match fmt {
                Format::Json => write_json(out, &a),
                _ => write_matrix(out, fmt, &a),
            }
        }
        Command::Solve { input, rhs } => {
            let bd = load_bd(input)?;
            let b = load_vector(rhs)?;
            let x = solve_system(&bd, &b)?;
            write_vector(out, fmt, "x", &x)
        }
        Command::Eig(input) => {
            let bd = load_bd(input)?;
            let s = spectral::eigenvalues(&bd, &policy(cli)?)?;
            write_spectrum(out, fmt, &s)
        }
        Command::Svd(input) => {
            let bd = load_bd(input)?;
            let s = spectral::singular_values(&bd, &policy(cli)?)?;
            write_spectrum(out, fmt, &s)
        }
        Command::Qr(input) => {
            let bd = load_bd(input)?;
            let qr = spectral::qr(&bd, &policy(cli)?)?;
            write_qr(out, fmt, &qr)
        }
        Command::Lsq { input, rhs } => {
            let bd = load_bd(input)?;
            let f = load_vector(rhs)?;
            let sol = spectral::least_squares(&bd, &f, &policy(cli)?)?;
            write_lsq(out, fmt, &sol)
        }
        Command::Repro { example } => {
            let report = repro::run(*example, &policy(cli)?)?;
            write_repro(out, fmt, &report)
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// An exact rational from `p/q`, an integer, or a decimal with optional
/// exponent (`0.25`, `-1.5e-3`).
pub fn parse_rational(token: &str) -> std::result::Result<Rational, String> {
    let bad = || format!("not a number: `{token}`");
    if token.contains('/') {
        return token.parse::<Rational>().map_err(|_| bad());
    }
    let (body, exp) = match token.find(['e', 'E']) {
        Some(k) => (
            &token[..k],
            token[k + 1..]
                .parse::<i32>()
                .map_err(|_| bad())?
                .clamp(-10_000, 10_000),
        ),
        None => (token, 0),
    };
    let (neg, body) = match body.as_bytes().first() {
        Some(b'-') => (true, &body[1..]),
        Some(b'+') => (false, &body[1..]),
        _ => (false, body),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.bytes().chain(frac.bytes()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let mut r = Rational::from(digits.parse::<Integer>().map_err(|_| bad())?);
    let scale = exp - frac.len() as i32;
    if scale.unsigned_abs() > 4096 {
        return Err(format!("exponent out of range: `{token}`"));
    }
    let ten = Rational::from(Integer::from(10).pow(scale.unsigned_abs()));
    if scale >= 0 {
        r *= ten;
    } else {
        r /= ten;
    }
    if neg {
        r = -r;
    }
    Ok(r)
}

fn parse_tokens(text: &str, origin: &str) -> std::result::Result<Vec<Rational>, Failure> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).map_err(|e| Failure::Input(format!("{origin}: {e}"))))
        .collect()
}

fn load_bd(input: &NodeInput) -> std::result::Result<BdMatrix<f64>, Failure> {
    let text = read(&input.nodes)?;
    let exact = parse_tokens(&text, &input.nodes.display().to_string())?;
    let rounded: Vec<f64> = exact.iter().map(rational_to_f64).collect();
    let nodes = validate_nodes(&rounded)?;
    let degree = BasisDegree::new(input.degree, &nodes)?;
    if input.exact_nodes {
        Ok(compute_bd_rounded(&exact, degree.get())?)
    } else {
        Ok(compute_bd(&nodes, degree)?)
    }
}

/// A vector given inline or as the path of a file holding it.
fn load_vector(arg: &str) -> std::result::Result<Vec<f64>, Failure> {
    let path = Path::new(arg);
    let (text, origin) = if path.is_file() {
        (read(path)?, arg.to_string())
    } else {
        (arg.to_string(), "--rhs".to_string())
    };
    Ok(parse_tokens(&text, &origin)?
        .iter()
        .map(rational_to_f64)
        .collect())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn join(values: &[f64], sep: &str) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn write_matrix(out: &mut dyn Write, fmt: Format, m: &DenseMatrix) -> Outcome {
    let sep = if fmt == Format::Csv { "," } else { " " };
    for i in 0..m.rows() {
        writeln!(out, "{}", join(m.row(i), sep))?;
    }
    Ok(())
}

fn write_vector(out: &mut dyn Write, fmt: Format, name: &str, v: &[f64]) -> Outcome {
    match fmt {
        Format::Text => writeln!(out, "{}", join(v, " "))?,
        Format::Csv => {
            writeln!(out, "{name}")?;
            for x in v {
                writeln!(out, "{x}")?;
            }
        }
        Format::Json => return write_json(out, &serde_json::json!({ name: v })),
    }
    Ok(())
}

fn write_spectrum(out: &mut dyn Write, fmt: Format, s: &Spectrum) -> Outcome {
    match fmt {
        Format::Text => {
            for v in &s.values {
                writeln!(out, "{v}")?;
            }
            writeln!(out, "achieved_bits = {}", s.achieved_bits)?;
        }
        Format::Csv => {
            writeln!(out, "value")?;
            for v in &s.values {
                writeln!(out, "{v}")?;
            }
        }
        Format::Json => return write_json(out, s),
    }
    Ok(())
}

fn write_qr(out: &mut dyn Write, fmt: Format, qr: &QrResult) -> Outcome {
    match fmt {
        Format::Text => {
            writeln!(out, "Q =")?;
            write_matrix(out, fmt, &qr.q)?;
            writeln!(out, "R =")?;
            write_matrix(out, fmt, &qr.r)?;
            writeln!(out, "achieved_bits = {}", qr.achieved_bits)?;
        }
        Format::Csv => {
            writeln!(out, "factor,row,col,value")?;
            for (name, m) in [("Q", &qr.q), ("R", &qr.r)] {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        writeln!(out, "{name},{i},{j},{}", m[(i, j)])?;
                    }
                }
            }
        }
        Format::Json => return write_json(out, qr),
    }
    Ok(())
}

fn write_lsq(out: &mut dyn Write, fmt: Format, sol: &LsqSolution) -> Outcome {
    match fmt {
        Format::Text => {
            writeln!(out, "c = {}", join(&sol.coefficients, " "))?;
            writeln!(out, "r = {}", join(&sol.residual, " "))?;
            writeln!(out, "residual_norm = {}", sol.residual_norm)?;
            writeln!(out, "achieved_bits = {}", sol.achieved_bits)?;
        }
        Format::Csv => {
            writeln!(out, "quantity,index,value")?;
            for (i, v) in sol.coefficients.iter().enumerate() {
                writeln!(out, "c,{i},{v}")?;
            }
            for (i, v) in sol.residual.iter().enumerate() {
                writeln!(out, "r,{i},{v}")?;
            }
            writeln!(out, "residual_norm,0,{}", sol.residual_norm)?;
        }
        Format::Json => return write_json(out, sol),
    }
    Ok(())
}

/// Two significant digits with a signed two-digit exponent, `0` for zero.
pub fn two_digits(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{v:.1e}");
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

fn write_repro(out: &mut dyn Write, fmt: Format, r: &ReproReport) -> Outcome {
    let label = r.example.value_label();
    match fmt {
        Format::Text => {
            writeln!(
                out,
                "{}: {}x{} Bernstein-Vandermonde matrix, n = {}",
                r.example,
                r.rows_of_a,
                r.cols_of_a,
                r.example.degree()
            )?;
            writeln!(out, "kappa2 = {}", two_digits(r.kappa2))?;
            writeln!(out, "{label:<12}{:<12}baseline", "MM")?;
            for row in &r.rows {
                writeln!(
                    out,
                    "{:<12}{:<12}{}",
                    two_digits(row.reference),
                    two_digits(row.mm_rel_err),
                    two_digits(row.baseline_rel_err)
                )?;
            }
            writeln!(
                out,
                "achieved_bits = {}, reference_bits = {}",
                r.achieved_bits, r.reference_bits
            )?;
        }
        Format::Csv => {
            writeln!(out, "{label},mm_rel_err,baseline_rel_err")?;
            for row in &r.rows {
                writeln!(
                    out,
                    "{},{},{}",
                    row.reference, row.mm_rel_err, row.baseline_rel_err
                )?;
            }
        }
        Format::Json => return write_json(out, r),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_rational("0.25").unwrap(), Rational::from((1, 4)));
        assert_eq!(parse_rational("1/3").unwrap(), Rational::from((1, 3)));
        assert_eq!(
            parse_rational("-1.5e-3").unwrap(),
            Rational::from((-3, 2000))
        );
        assert_eq!(parse_rational("2E2").unwrap(), Rational::from(200));
        assert_eq!(parse_rational(".5").unwrap(), Rational::from((1, 2)));
        for bad in ["", ".", "abc", "1.2.3", "1e", "0x10", "1/0/2"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn two_digit_format() {
        assert_eq!(two_digits(0.0), "0");
        assert_eq!(two_digits(1.0), "1.0e+00");
        assert_eq!(two_digits(2.87e-15), "2.9e-15");
        assert_eq!(two_digits(1.9e12), "1.9e+12");
    }

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("bvtn").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["bd", "--degree", "1"]).0, 2);
        assert_eq!(run_str(&["repro", "example9"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("repro"));
    }
}

//! Command-line front end.
//!
//! Exit codes: `0` success, `1` internal consistency failure, `2` invalid
//! triplet, `3` degenerate equation system, `64` usage error.

use std::io::{BufRead, Write};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::betti::BettiDiagram;
use crate::hilbert::{betti, chi_family, solve_alpha, SolveError};
use crate::linalg::{render_in_basis, Rational};
use crate::squarefree::{rotated_betti_via_strands, triplet_betti, SquarefreeError};
use crate::supernatural::{
    buchsbaum_rim, eagon_northcott, pure_zip, schur_roots, supernatural_poly, supernatural_table, tensor_roots,
    RootSequence, SupernaturalError,
};
use crate::table::{default_window, full_table_with, TableError};
use crate::triplet::{
    diagnose_triplet, dual, enumerate_triplets_bounded, rotate, HomologyTriplet, TripletError, TripletRecord,
    DEFAULT_MAX_N,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable overriding the enumeration bound.
pub const MAX_N_VAR: &str = "TRIPLETS_MAX_N";

#[derive(Debug, Parser)]
#[command(name = "triplets", version, about = "Homology triplets, Hilbert polynomials and cohomology tables")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every clause of the triplet definition.
    Validate(TripletArgs),
    /// Solve for the Hilbert polynomial coefficients.
    Solve(TripletArgs),
    /// Betti diagram of the pure complex with degrees B.
    Betti(TripletArgs),
    /// Betti diagrams of the triplet and its two rotations.
    Triplet(TripletArgs),
    /// Hypercohomology table.
    Table(TableArgs),
    /// The rotated triplet (refl H, refl C, B).
    Rotate(TripletArgs),
    /// The dual triplet (refl B, C, H).
    Dual(TripletArgs),
    /// All triplets for a given n, one per line.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Classical pure complexes.
    #[command(subcommand)]
    Classical(Classical),
    /// Supernatural table and zip complex of a root sequence.
    Zip(ZipArgs),
}

#[derive(Debug, Args)]
struct TripletArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "B", value_delimiter = ',', allow_hyphen_values = true)]
    b: Option<Vec<i64>>,
    #[arg(long = "H", value_delimiter = ',', allow_hyphen_values = true)]
    h: Option<Vec<i64>>,
    #[arg(long = "C", value_delimiter = ',', allow_hyphen_values = true)]
    c: Option<Vec<i64>>,
    /// Read one JSON triplet {"n","B","H","C"} per line from stdin.
    #[arg(long)]
    stdin: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    triplet: TripletArgs,
    /// Column range `lo,hi`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
}

#[derive(Debug, Subcommand)]
enum Classical {
    /// Eagon–Northcott complex of a generic n × w map.
    En {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
    },
    /// Buchsbaum–Rim family from O(twist) on a space of dimension w-1.
    Br {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Schur bundle roots from a partition.
    Schur {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda: Vec<i64>,
    },
    /// Tensor product of twisted structure sheaves.
    Tensor {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        weights: Vec<i64>,
    },
}

#[derive(Debug, Args)]
struct ZipArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 0..)]
    roots: Vec<i64>,
    /// Scale `c`; defaults to the smallest value making all dimensions integral.
    #[arg(long, value_parser = parse_rational)]
    scale: Option<Rational>,
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo},{hi}"));
    }
    Ok((lo, hi))
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| format!("{e}"))
}

/// Why a command stopped.
enum Failure {
    Usage(String),
    Invalid(Vec<TripletError>),
    Degenerate(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Degenerate(_) => EXIT_DEGENERATE,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn lines(&self) -> Vec<String> {
        match self {
            Failure::Usage(m) => vec![format!("usage error: {m}")],
            Failure::Invalid(errors) => errors.iter().map(|e| format!("invalid triplet: {e}")).collect(),
            Failure::Degenerate(m) => vec![format!("degenerate system: {m}")],
            Failure::Internal(m) => vec![format!("internal error: {m}")],
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        if e.is_degenerate() {
            Failure::Degenerate(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<SquarefreeError> for Failure {
    fn from(e: SquarefreeError) -> Self {
        match e {
            SquarefreeError::Rotation { rotation, source } if source.is_degenerate() => {
                Failure::Degenerate(format!("rotation {rotation}: {source}"))
            }
            SquarefreeError::Solve(s) => s.into(),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Self {
        match e {
            TableError::Solve(s) => s.into(),
            TableError::Window { .. } => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<SupernaturalError> for Failure {
    fn from(e: SupernaturalError) -> Self {
        match e {
            SupernaturalError::NonIntegral { .. } => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<TripletError> for Failure {
    fn from(e: TripletError) -> Self {
        Failure::Invalid(vec![e])
    }
}

type Outcome = Result<String, Failure>;

fn records(args: &TripletArgs, stdin: &mut dyn BufRead) -> Result<Vec<TripletRecord>, Failure> {
    if args.stdin {
        let mut out = Vec::new();
        for (k, line) in stdin.lines().enumerate() {
            let line = line.map_err(|e| Failure::Usage(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: TripletRecord =
                serde_json::from_str(&line).map_err(|e| Failure::Usage(format!("stdin line {}: {e}", k + 1)))?;
            out.push(rec);
        }
        return Ok(out);
    }
    match (&args.n, &args.b, &args.h, &args.c) {
        (Some(n), Some(b), Some(h), Some(c)) => Ok(vec![TripletRecord { n: *n, b: b.clone(), h: h.clone(), c: c.clone() }]),
        _ => Err(Failure::Usage("--n, --B, --H and --C are required unless --stdin is given".into())),
    }
}

fn validated(rec: &TripletRecord) -> Result<HomologyTriplet, Failure> {
    let errors = diagnose_triplet(rec.n, &rec.b, &rec.h, &rec.c);
    if !errors.is_empty() {
        return Err(Failure::Invalid(errors));
    }
    Ok(rec.validate()?)
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn invariants(t: &HomologyTriplet) -> serde_json::Value {
    json!({
        "b": t.codim(), "h": t.h(), "c": t.c(),
        "iB": t.internal_nondegrees(), "sH": t.homology_span(), "sC": t.cohomology_span(),
    })
}

fn cmd_validate(rec: &TripletRecord, as_json: bool) -> (String, i32) {
    let errors = diagnose_triplet(rec.n, &rec.b, &rec.h, &rec.c);
    if errors.is_empty() {
        let t = rec.validate().expect("no failing clause");
        if as_json {
            let v = json!({"valid": true, "triplet": rec, "invariants": invariants(&t)});
            (format!("{}\n", to_json(&v)), EXIT_OK)
        } else {
            let text = format!(
                "valid: {t}\nb={} h={} c={} i(B)={} s(H)={} s(C)={}\n",
                t.codim(),
                t.h(),
                t.c(),
                t.internal_nondegrees(),
                t.homology_span(),
                t.cohomology_span()
            );
            (text, EXIT_OK)
        }
    } else if as_json {
        let msgs: Vec<String> = errors.iter().map(ToString::to_string).collect();
        let v = json!({"valid": false, "triplet": rec, "errors": msgs});
        (format!("{}\n", to_json(&v)), EXIT_INVALID)
    } else {
        let mut text = format!("invalid: {rec}\n");
        for e in &errors {
            text.push_str(&format!("  {e}\n"));
        }
        (text, EXIT_INVALID)
    }
}

fn cmd_solve(t: &HomologyTriplet, as_json: bool) -> Outcome {
    let alpha = solve_alpha(t)?;
    if as_json {
        return Ok(format!("{}\n", to_json(&alpha)));
    }
    let p = alpha.polynomial();
    Ok(format!(
        "alpha: {alpha}\nP(d) = {}\nP(d) = {}\n",
        render_in_basis(&alpha.full(), t.n()),
        p.pretty()
    ))
}

fn diagram_text(label: &str, d: &BettiDiagram) -> String {
    format!("{label}: {}\n{}", d.complex_string(), d.render())
}

fn cmd_betti(t: &HomologyTriplet, as_json: bool) -> Outcome {
    let d = betti(t, &solve_alpha(t)?)?;
    if as_json {
        return Ok(format!("{}\n", to_json(&d)));
    }
    Ok(diagram_text("F", &d))
}

fn cmd_triplet(t: &HomologyTriplet, as_json: bool) -> Outcome {
    let diagrams = triplet_betti(t)?;
    rotated_betti_via_strands(t, &solve_alpha(t)?)?;
    if as_json {
        return Ok(format!("{}\n", to_json(&diagrams)));
    }
    let labels = ["F", "(AD)F", "(AD)^2F"];
    let parts: Vec<String> = labels.iter().zip(&diagrams).map(|(l, d)| diagram_text(l, d)).collect();
    Ok(parts.join("\n"))
}

fn cmd_table(t: &HomologyTriplet, window: Option<(i64, i64)>, as_json: bool) -> Outcome {
    let alpha = solve_alpha(t)?;
    let family = chi_family(t, &alpha)?;
    let table = full_table_with(t, &alpha, &family, window.unwrap_or_else(|| default_window(t.n())))?;
    if as_json {
        return Ok(format!("{}\n", to_json(&table)));
    }
    Ok(table.render())
}

fn cmd_derived(t: &HomologyTriplet, op: fn(&HomologyTriplet) -> Result<HomologyTriplet, TripletError>, as_json: bool) -> Outcome {
    let r = op(t).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(if as_json { format!("{}\n", r.record()) } else { format!("{r}\n") })
}

fn max_n() -> Result<usize, Failure> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{MAX_N_VAR} must be a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn cmd_enumerate(n: usize, as_json: bool) -> Outcome {
    let found = enumerate_triplets_bounded(n, max_n()?).map_err(|e| match e {
        TripletError::TooLarge { .. } => Failure::Usage(e.to_string()),
        other => Failure::Internal(other.to_string()),
    })?;
    let mut out = String::new();
    for t in found {
        if as_json {
            out.push_str(&format!("{}\n", t.record()));
        } else {
            out.push_str(&format!("{t}\n"));
        }
    }
    Ok(out)
}

fn report_roots(r: &RootSequence, n: usize, window: Option<(i64, i64)>, as_json: bool) -> Outcome {
    let rep = pure_zip(r, n)?;
    let poly = supernatural_poly(r);
    let window = window.unwrap_or_else(|| default_window(n));
    let table = supernatural_table(r, window)?;
    let diagram = rep.diagram();
    if as_json {
        let v = json!({
            "roots": r.roots(),
            "scale": r.scale().to_string(),
            "scale_assumed": r.scale_assumed,
            "n": n,
            "complex": diagram,
            "is_resolution": rep.is_resolution,
            "is_cm": rep.is_cm,
            "table": table,
        });
        return Ok(format!("{}\n", to_json(&v)));
    }
    let roots: Vec<String> = r.roots().iter().map(ToString::to_string).collect();
    let mut out = format!("roots: ({})\nscale: {}", roots.join(","), r.scale());
    if r.scale_assumed {
        out.push_str(" (assumed)");
    }
    out.push_str(&format!("\nP(t) = {}\n", poly.pretty()));
    if rep.short_space {
        out.push_str(&format!("warning: n = {n} is smaller than the number of roots\n"));
    }
    out.push_str(&table.render());
    out.push_str(&diagram_text("zip", &diagram));
    out.push_str(&format!("resolution: {}\nCohen-Macaulay: {}\n", rep.is_resolution, rep.is_cm));
    Ok(out)
}

fn cmd_classical(c: &Classical, as_json: bool) -> Outcome {
    match c {
        Classical::En { n, w } => {
            if *w == 0 || w > n {
                return Err(SupernaturalError::Width { w: *w, n: *n }.into());
            }
            report_roots(&eagon_northcott(*w), *n, None, as_json)
        }
        Classical::Br { n, w, twist } => {
            if *w == 0 || w > n {
                return Err(SupernaturalError::Width { w: *w, n: *n }.into());
            }
            report_roots(&buchsbaum_rim(*twist, w - 1), *n, None, as_json)
        }
        Classical::Schur { n, lambda } => {
            let roots = schur_roots(lambda)?.roots().to_vec();
            report_roots(&RootSequence::with_integral_scale(roots)?, *n, None, as_json)
        }
        Classical::Tensor { n, dims, weights } => report_roots(&tensor_roots(dims, weights)?, *n, None, as_json),
    }
}

fn cmd_zip(z: &ZipArgs, as_json: bool) -> Outcome {
    let r = match &z.scale {
        Some(c) => RootSequence::new(z.roots.clone(), c.clone())?,
        None => RootSequence::with_integral_scale(z.roots.clone())?,
    };
    report_roots(&r, z.n, z.window, as_json)
}

/// Runs a triplet command over every input record; the exit code is the
/// largest one produced.
fn per_triplet(
    args: &TripletArgs,
    stdin: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
    f: &dyn Fn(&HomologyTriplet) -> Outcome,
) -> i32 {
    let recs = match records(args, stdin) {
        Ok(r) => r,
        Err(e) => return fail(err, e),
    };
    let mut code = EXIT_OK;
    for rec in &recs {
        let result = validated(rec).and_then(|t| f(&t));
        match result {
            Ok(text) => {
                let _ = out.write_all(text.as_bytes());
            }
            Err(e) => {
                if args.stdin {
                    let _ = writeln!(err, "{rec}");
                }
                code = code.max(fail(err, e));
            }
        }
    }
    code
}

fn fail(err: &mut dyn Write, f: Failure) -> i32 {
    for line in f.lines() {
        let _ = writeln!(err, "{line}");
    }
    f.code()
}

/// Parses `args` (including the program name) and runs one command.
pub fn run(args: &[String], stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
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
    let js = cli.json;
    match &cli.command {
        Command::Validate(a) => {
            let recs = match records(a, stdin) {
                Ok(r) => r,
                Err(e) => return fail(err, e),
            };
            let mut code = EXIT_OK;
            for rec in &recs {
                let (text, c) = cmd_validate(rec, js);
                let _ = out.write_all(text.as_bytes());
                code = code.max(c);
            }
            code
        }
        Command::Solve(a) => per_triplet(a, stdin, out, err, &|t| cmd_solve(t, js)),
        Command::Betti(a) => per_triplet(a, stdin, out, err, &|t| cmd_betti(t, js)),
        Command::Triplet(a) => per_triplet(a, stdin, out, err, &|t| cmd_triplet(t, js)),
        Command::Table(a) => per_triplet(&a.triplet, stdin, out, err, &|t| cmd_table(t, a.window, js)),
        Command::Rotate(a) => per_triplet(a, stdin, out, err, &|t| cmd_derived(t, rotate, js)),
        Command::Dual(a) => per_triplet(a, stdin, out, err, &|t| cmd_derived(t, dual, js)),
        Command::Enumerate { n } => emit(cmd_enumerate(*n, js), out, err),
        Command::Classical(c) => emit(cmd_classical(c, js), out, err),
        Command::Zip(z) => emit(cmd_zip(z, js), out, err),
    }
}

fn emit(result: Outcome, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => fail(err, e),
    }
}

/// Runs with string arguments and empty stdin; returns `(code, stdout, stderr)`.
pub fn run_captured(args: &[&str], stdin: &str) -> (i32, String, String) {
    let args: Vec<String> = std::iter::once("triplets").chain(args.iter().copied()).map(String::from).collect();
    let mut input = std::io::Cursor::new(stdin.as_bytes().to_vec());
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&args, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8"), String::from_utf8(err).expect("utf-8"))
}

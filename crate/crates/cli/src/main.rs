//! `isotri`: count, certify and bound right isosceles configurations.
//!
//! Every command prints one JSON document on stdout; diagnostics go to
//! stderr. Exit codes: 0 success, 2 input error, 3 threshold or hypothesis
//! not met, 4 resource cap.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use isotri_core::counting::difference_counts;
use isotri_core::extremal::{max_configuration_free, DEFAULT_BUDGET};
use isotri_core::ff::{check_cardinality_bound, evaluate_identity, find_configurations, slice_rank_report, Mode};
use isotri_core::popular::{embed_to_cyclic, find_popular_certificate, find_popular_scan};
use isotri_core::regularity::{certify, RegularityParams};
use isotri_core::{Error, FFConfigSet, GridSet};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "isotri", version, about = "Right isosceles configurations in grids and finite fields")]
struct Cli {
    /// Worker threads (falls back to ISOTRI_THREADS, then the core count).
    #[arg(long, global = true, env = "ISOTRI_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Configuration counts for one difference or for all of them.
    Count(CountArgs),
    /// Find a popular difference.
    Popular(PopularArgs),
    /// Regularity certificate for the grid indicator.
    Certify(CertifyArgs),
    /// Exponent count D and the bound 3 c_q^(2n).
    Slicerank(SliceRankArgs),
    /// Largest configuration-free subset of the N x N grid.
    Extremal(ExtremalArgs),
    /// Configurations, identity and cardinality bound for a set in (F_q^n)^2.
    Ffcheck(FfCheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFormat {
    Text,
    Json,
}

#[derive(Args)]
struct GridInput {
    /// Grid file, or `-` for stdin.
    grid: PathBuf,
    /// `text`: N lines of N characters from {0, 1}; `json`: {"side", "points"} with 1-based points.
    #[arg(long, value_enum, default_value = "text")]
    format: GridFormat,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    input: GridInput,
    /// Read differences modulo N.
    #[arg(long)]
    wraparound: bool,
    /// A single difference `m,n`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, conflicts_with = "all", required_unless_present = "all")]
    difference: Option<(i64, i64)>,
    /// The full table, sorted by count descending.
    #[arg(long)]
    all: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PopularMethod {
    Scan,
    Certificate,
}

#[derive(Args)]
struct PopularArgs {
    #[command(flatten)]
    input: GridInput,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "scan")]
    method: PopularMethod,
    /// Count modulo N (scan only).
    #[arg(long)]
    wraparound: bool,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    input: GridInput,
    #[arg(long)]
    epsilon: f64,
    /// Certify the indicator inside (Z/N')^2 with N' the least odd integer >= 5N
    /// instead of on (Z/N)^2 (which needs odd N).
    #[arg(long)]
    embed: bool,
}

#[derive(Args)]
struct SliceRankArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct ExtremalArgs {
    #[arg(long)]
    n: usize,
    /// Search node budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FfMode {
    Strict,
    NotAllEqual,
}

#[derive(Args)]
struct FfCheckArgs {
    /// Point file: header `q n`, then one point of 2n digits per line.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "strict")]
    mode: FfMode,
    /// Also evaluate both sides of the diagonal identity on A^3.
    #[arg(long)]
    identity: bool,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `m,n`, got {s:?}"))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

enum Failure {
    Input(String),
    NotMet,
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceCap(_) | Error::TowerExhausted { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_source(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn load_grid(input: &GridInput) -> Result<GridSet, Failure> {
    let text = read_source(&input.grid)?;
    let parsed = match input.format {
        GridFormat::Text => GridSet::parse_text(&text),
        GridFormat::Json => GridSet::parse_json(&text),
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", input.grid.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn cmd_count(args: &CountArgs) -> Outcome {
    let set = load_grid(&args.input)?;
    let counts = difference_counts(&set, args.wraparound);
    let mut out = json!({ "side": set.side(), "cardinality": set.cardinality(), "wraparound": args.wraparound });
    if let Some((m, n)) = args.difference {
        out["difference"] = json!([m, n]);
        out["count"] = json!(counts.get(m, n));
    } else {
        let mut table: Vec<((i64, i64), u64)> = counts.iter().collect();
        table.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        out["counts"] = table.into_iter().map(|((m, n), c)| json!({ "m": m, "n": n, "count": c })).collect();
        out["total"] = json!(counts.total());
    }
    Ok((out, true))
}

fn cmd_popular(args: &PopularArgs) -> Outcome {
    let set = load_grid(&args.input)?;
    let result = match args.method {
        PopularMethod::Scan => find_popular_scan(&set, args.epsilon, args.wraparound)?,
        PopularMethod::Certificate => {
            if args.wraparound {
                return Err(Failure::Input("--wraparound applies to the scan method only".into()));
            }
            match find_popular_certificate(&set, args.epsilon) {
                Err(e @ Error::CertificateFailed { .. }) => {
                    eprintln!("isotri: {e}");
                    return Err(Failure::NotMet);
                }
                other => other?,
            }
        }
    };
    Ok((to_value(&result), result.met))
}

fn cmd_certify(args: &CertifyArgs) -> Outcome {
    let set = load_grid(&args.input)?;
    let f = if args.embed { embed_to_cyclic(&set) } else { set.indicator() };
    let params = RegularityParams::new(args.epsilon)?;
    let cert = certify(&f, &params)?;
    let mut out = to_value(&cert);
    out["side"] = json!(set.side());
    out["embedded"] = json!(args.embed);
    Ok((out, cert.pass))
}

fn cmd_slicerank(args: &SliceRankArgs) -> Outcome {
    let report = slice_rank_report(args.q, args.n)?;
    Ok((to_value(&report), report.d_bound_ok))
}

fn cmd_extremal(args: &ExtremalArgs) -> Outcome {
    let r = max_configuration_free(args.n, args.budget)?;
    let out = json!({
        "side": r.side,
        "max_size": r.max_size,
        "witness": r.witness.to_text(),
        "nodes_explored": r.nodes_explored,
        "lower_bound_only": r.lower_bound_only,
    });
    if r.lower_bound_only {
        print_report("extremal", out);
        return Err(Failure::Cap(format!("node budget {} exhausted; max_size is a lower bound", args.budget)));
    }
    Ok((out, true))
}

fn cmd_ffcheck(args: &FfCheckArgs) -> Outcome {
    let text = read_source(&args.file)?;
    let set = FFConfigSet::parse_text(&text).map_err(|e| Failure::Input(format!("{}: {e}", args.file.display())))?;
    let mode = match args.mode {
        FfMode::Strict => Mode::Strict,
        FfMode::NotAllEqual => Mode::NotAllEqual,
    };
    let found = find_configurations(&set, mode)?;
    let show = |i: usize| set.point(i).iter().map(|&d| d as u32).collect::<Vec<_>>();
    let mut out = json!({
        "q": set.q(),
        "n": set.n(),
        "size": set.len(),
        "mode": mode,
        "configurations": found.len(),
        "configuration_free": found.is_empty(),
        "first_configuration": found.first().map(|t| t.map(show)),
    });
    let strict_free = match mode {
        Mode::Strict => found.is_empty(),
        Mode::NotAllEqual => find_configurations(&set, Mode::Strict)?.is_empty(),
    };
    if strict_free {
        out["cardinality"] = to_value(&check_cardinality_bound(&set)?);
    }
    if args.identity {
        let check = evaluate_identity(&set)?;
        out["identity"] = json!({
            "holds": check.holds(),
            "triples_checked": check.triples_checked,
            "mismatches": check.mismatches.len(),
            "first_mismatch": check.mismatches.first().map(|t| t.map(show)),
        });
    }
    Ok((out, found.is_empty()))
}

fn print_report(command: &str, mut body: Value) {
    body["command"] = json!(command);
    body["schema_version"] = json!(SCHEMA_VERSION);
    println!("{}", serde_json::to_string_pretty(&body).expect("json"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("isotri: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("isotri: could not size the worker pool: {e}");
        }
    }
    let (name, outcome) = match &cli.command {
        Command::Count(a) => ("count", cmd_count(a)),
        Command::Popular(a) => ("popular", cmd_popular(a)),
        Command::Certify(a) => ("certify", cmd_certify(a)),
        Command::Slicerank(a) => ("slicerank", cmd_slicerank(a)),
        Command::Extremal(a) => ("extremal", cmd_extremal(a)),
        Command::Ffcheck(a) => ("ffcheck", cmd_ffcheck(a)),
    };
    match outcome {
        Ok((body, ok)) => {
            print_report(name, body);
            ExitCode::from(if ok { 0 } else { 3 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("isotri: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NotMet) => ExitCode::from(3),
        Err(Failure::Cap(msg)) => {
            eprintln!("isotri: {msg}");
            ExitCode::from(4)
        }
    }
}

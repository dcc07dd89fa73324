use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use linkspine::corpus::{self, Check};
use linkspine::families::{fib_torus, parse_range, FamilyError, FamilyPattern, FamilySpec};
use linkspine::report::{report, report_family, ReportError, ReportOptions, VolumeInput};
use linkspine::roots::{complexity, normalize, parse_expression};
use linkspine::Report;
use rayon::prelude::*;

/// Certified bounds on the spine complexity of links in the 3-sphere.
///
/// Exit codes: 0 success, 1 self-test failure, 2 input error,
/// 3 contradiction between certified bounds.
#[derive(Parser)]
#[command(name = "linkspine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Treat the input as prime and non-split, certifying the homology bound.
    #[arg(long, global = true)]
    assume_prime: bool,
    /// Admit bounds that only hold for large family members.
    #[arg(long, global = true)]
    include_asymptotic: bool,
    /// Hyperbolic volume of the link exterior.
    #[arg(long, global = true, requires = "volume_source")]
    volume: Option<f64>,
    /// Where the volume came from (required with --volume).
    #[arg(long, global = true, requires = "volume")]
    volume_source: Option<String>,
    /// A volume within this distance of an integer multiple of v3 counts as exact.
    #[arg(long, global = true, default_value_t = 1e-4)]
    volume_tolerance: f64,
    /// Self-test: diagrams with at most 8 crossings, shorter family ranges.
    #[arg(long, global = true)]
    quick: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Bound report for a PD code, a braid (`strands=3 : 1 -2 1 -2`) or a
    /// family member (`torus(3,2)`, `fib(6)`, `th(4)`, `twist(5)`, `xn(7)`).
    Bounds { input: String },
    /// One report per family member, in order. The pattern is a family name
    /// (`fib`, `th`, `twist`, `xn`) or a call with one `_` (`torus(2,_)`).
    Sweep { family: String, range: String },
    /// Normalize a connected-sum expression and report its complexity.
    Roots { expression: String },
    /// Run the oracle and invariant checks over a PD corpus.
    Selftest {
        /// Directory of `.pd` files; the bundled corpus by default.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Contradiction(String),
    Selftest,
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        if e.is_contradiction() {
            Failure::Contradiction(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Selftest) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Contradiction(msg)) => {
            eprintln!("contradiction: {msg}");
            ExitCode::from(3)
        }
    }
}

fn options(cli: &Cli) -> ReportOptions {
    ReportOptions {
        assume_prime: cli.assume_prime,
        include_asymptotic: cli.include_asymptotic,
        volume: cli.volume.map(|value| VolumeInput {
            value,
            source: cli.volume_source.clone().unwrap_or_default(),
            tolerance: cli.volume_tolerance,
        }),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match &cli.command {
        Command::Bounds { input } => {
            let r = report(input, &options(cli))?;
            let text = match cli.format {
                Format::Table => table(&r),
                Format::Json => r.to_json() + "\n",
                Format::Csv => csv_rows(&[Row::Report(r)]),
            };
            write(&mut out, &text);
        }
        Command::Sweep { family, range } => {
            let pattern: FamilyPattern = family.parse().map_err(|e: FamilyError| Failure::Input(e.to_string()))?;
            let range = parse_range(range).map_err(|e| Failure::Input(e.to_string()))?;
            let opts = options(cli);
            let ks: Vec<u64> = range.collect();
            let rows: Vec<Result<Row, ReportError>> = ks.par_iter().map(|&k| sweep_row(&pattern, k, &opts)).collect();
            let mut ok = Vec::with_capacity(rows.len());
            let mut contradiction = None;
            for r in rows {
                match r {
                    Ok(row) => ok.push(row),
                    Err(e) => {
                        contradiction.get_or_insert(e.to_string());
                    }
                }
            }
            let text = match cli.format {
                Format::Table => sweep_table(&ok),
                Format::Json => ok.iter().map(|r| r.json() + "\n").collect(),
                Format::Csv => csv_rows(&ok),
            };
            write(&mut out, &text);
            if let Some(msg) = contradiction {
                return Err(Failure::Contradiction(msg));
            }
        }
        Command::Roots { expression } => {
            let e = parse_expression(expression).map_err(|e| Failure::Input(e.to_string()))?;
            let n = normalize(&e);
            let c = complexity(&n);
            let log = &n.log;
            let text = match cli.format {
                Format::Table => {
                    let mut s = format!("normal form  {}\ncomplexity   {c}\n", display_expr(&n.to_string()));
                    for l in log {
                        s += &format!("  {l}\n");
                    }
                    s
                }
                Format::Json => {
                    let v = serde_json::json!({
                        "input": expression,
                        "normal_form": n.to_string(),
                        "complexity": { "lower": c.lower, "upper": c.upper },
                        "log": log,
                    });
                    v.to_string() + "\n"
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let upper = c.upper.map(|u| u.to_string()).unwrap_or_default();
                    w.write_record(["input", "normal_form", "lower", "upper"])
                        .and_then(|_| {
                            w.write_record([expression.as_str(), &n.to_string(), &c.lower.to_string(), &upper])
                        })
                        .expect("in-memory csv");
                    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
                }
            };
            write(&mut out, &text);
        }
        Command::Selftest { corpus: dir } => {
            let entries = match dir {
                Some(d) => corpus::load_dir(d).map_err(|e| Failure::Input(format!("{}: {e}", d.display())))?,
                None => corpus::bundled(),
            };
            let checks = corpus::selftest(&entries, cli.quick);
            let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
            let text = match cli.format {
                Format::Json => serde_json::to_string(&checks).expect("checks serialize") + "\n",
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["check", "passed", "detail"]).expect("in-memory csv");
                    for c in &checks {
                        w.write_record([c.name.as_str(), &c.passed.to_string(), &c.detail]).expect("in-memory csv");
                    }
                    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
                }
                Format::Table => {
                    let mut s = String::new();
                    for c in &failed {
                        s += &format!("FAIL {}: {}\n", c.name, c.detail);
                    }
                    s + &format!("{} files, {} checks, {} failed\n", entries.len(), checks.len(), failed.len())
                }
            };
            write(&mut out, &text);
            if !failed.is_empty() {
                return Err(Failure::Selftest);
            }
        }
    }
    Ok(())
}

fn write(out: &mut impl Write, text: &str) {
    // A closed pipe is not an error worth a panic.
    let _ = out.write_all(text.as_bytes());
}

fn display_expr(s: &str) -> String {
    if s.is_empty() {
        "(empty)".into()
    } else {
        s.to_string()
    }
}

enum Row {
    Report(Report),
    Skip { input: String, reason: String },
}

impl Row {
    fn json(&self) -> String {
        match self {
            Row::Report(r) => r.to_json(),
            Row::Skip { input, reason } => serde_json::json!({ "input": input, "skipped": reason }).to_string(),
        }
    }
}

fn sweep_row(pattern: &FamilyPattern, k: u64, opts: &ReportOptions) -> Result<Row, ReportError> {
    let skip = |input: String, reason: String| Ok(Row::Skip { input, reason });
    let input = format!("{}({k})", pattern.name());
    let spec: FamilySpec = match pattern.instantiate(k) {
        Ok(s) => s,
        Err(e) => return skip(input, e.to_string()),
    };
    if let FamilySpec::Fib(n) = spec {
        match fib_torus(n) {
            Ok(f) if !f.valid => return skip(spec.to_string(), "n must be >= 4 and 0 or 2 mod 3".into()),
            Err(e) => return skip(spec.to_string(), e.to_string()),
            Ok(_) => {}
        }
    }
    match report_family(spec, opts) {
        Ok(r) => Ok(Row::Report(r)),
        Err(e) if e.is_contradiction() => Err(e),
        Err(e) => skip(spec.to_string(), e.to_string()),
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

fn upper(u: Option<u64>) -> String {
    u.map(|v| v.to_string()).unwrap_or_else(|| "inf".into())
}

fn table(r: &Report) -> String {
    let mut s = format!("input        {}\n", if r.input.is_empty() { "(unknot)" } else { &r.input });
    let crn = r.crn.map(|c| format!("{} ({})", c.value, c.status));
    s += &format!("crn          {}\n", opt(crn));
    s += &format!("determinant  {}\n", opt(r.determinant));
    s += &format!("components   {}\n", r.components);
    s += "bounds\n";
    let width = r.bounds.iter().map(|b| b.tag.len()).max().unwrap_or(0);
    for b in &r.bounds {
        let status = b.status.to_string();
        s += &format!("  {}  {:<width$}  {:>6}  {status:<11}  {}\n", b.kind, b.tag, b.value, b.expression);
    }
    s += &format!("interval     [{}, {}]\n", r.interval.lower, upper(r.interval.upper));
    if !r.warnings.is_empty() {
        s += "warnings\n";
        for w in &r.warnings {
            s += &format!("  {w}\n");
        }
    }
    s
}

const COLUMNS: [&str; 8] = ["input", "crn", "crn_status", "determinant", "components", "lower", "upper", "note"];

fn columns(row: &Row) -> [String; 8] {
    match row {
        Row::Report(r) => [
            r.input.clone(),
            opt(r.crn.map(|c| c.value)),
            opt(r.crn.map(|c| c.status.to_string())),
            opt(r.determinant),
            r.components.to_string(),
            r.interval.lower.to_string(),
            upper(r.interval.upper),
            r.warnings.join("; "),
        ],
        Row::Skip { input, reason } => {
            let dash = || "-".to_string();
            [input.clone(), dash(), dash(), dash(), dash(), dash(), dash(), format!("skipped: {reason}")]
        }
    }
}

fn sweep_table(rows: &[Row]) -> String {
    let cells: Vec<[String; 8]> = rows.iter().map(columns).collect();
    let mut widths = COLUMNS.map(str::len);
    for c in &cells {
        for (w, x) in widths.iter_mut().zip(c.iter()).take(7) {
            *w = (*w).max(x.len());
        }
    }
    let line = |c: [&str; 8]| {
        let mut s = String::new();
        for (i, x) in c.iter().enumerate().take(7) {
            s += &format!("{x:<w$}  ", w = widths[i]);
        }
        s += c[7];
        s.trim_end().to_string() + "\n"
    };
    let mut s = line(COLUMNS);
    for c in &cells {
        s += &line(c.each_ref().map(String::as_str));
    }
    s
}

fn csv_rows(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory csv");
    for r in rows {
        w.write_record(columns(r)).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

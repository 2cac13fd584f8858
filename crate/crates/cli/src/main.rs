//! `orbitforge`: orbit-count tables, verification suites and Sharkovskii
//! bound queries.

mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use orbitforge::orbits::{all_pass, build_table, lucas_sequence, orbit_column, scan_conjectures, Check, CountKind};
use orbitforge::plmap::{PlMap, DEFAULT_PIECE_CAP};
use orbitforge::sharkovskii::{compare, sorted_periods, theorem3_bound};
use orbitforge::spectral::dominant_root;
use orbitforge::symbolic::big_json;
use orbitforge::Exec;
use serde_json::{json, Value};

const PIECE_CAP_ENV: &str = "ORBITFORGE_PIECE_CAP";

#[derive(Parser)]
#[command(name = "orbitforge", version, about = "Minimal periodic-orbit counts forced by the Sharkovskii ordering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapChoice {
    Thm1,
    Fn,
}

fn positive() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..)
}

#[derive(Subcommand)]
enum Command {
    /// Φ_n(m)/m for n <= n-max and Ψ(m)/m, for 1 <= m <= m-max.
    Table {
        #[arg(long, default_value_t = 5, value_parser = positive())]
        n_max: u32,
        #[arg(long, default_value_t = 31, value_parser = positive())]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// One column of orbit counts: Φ_n(m)/m, or Ψ(m)/m with --psi.
    Count {
        #[arg(long, default_value_t = 1, value_parser = positive(), conflicts_with = "psi")]
        n: u32,
        #[arg(long)]
        psi: bool,
        #[arg(long, default_value_t = 31, value_parser = positive())]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Lucas numbers a_1..a_{k-max}.
    Lucas {
        #[arg(long, default_value_t = 20, value_parser = positive())]
        k_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run verification suites; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long, value_parser = positive())]
        n: Option<u32>,
        #[arg(long, value_parser = positive())]
        k_max: Option<u32>,
        #[arg(long, value_parser = positive())]
        m_max: Option<u32>,
        #[arg(long, value_enum, default_value_t = MapChoice::Fn)]
        map: MapChoice,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact fixed-point and orbit counts of f^k by composition.
    Oracle {
        #[arg(long, value_enum, default_value_t = MapChoice::Thm1)]
        map: MapChoice,
        /// Read the map from a `{"nodes": [...]}` JSON file instead.
        #[arg(long, conflicts_with = "map")]
        map_file: Option<PathBuf>,
        #[arg(long, default_value_t = 2, value_parser = positive())]
        n: u32,
        #[arg(long, default_value_t = 10, value_parser = positive())]
        k_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dominant root λ_n of x^(2n+1) - 2x^(2n-1) - 1.
    Lambda {
        #[arg(long, default_value_t = 1, value_parser = positive())]
        n: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare s and t in the Sharkovskii order, or list periods up to m-max.
    Order {
        #[arg(long, requires = "t", value_parser = clap::value_parser!(u64).range(1..))]
        s: Option<u64>,
        #[arg(long, requires = "s", value_parser = clap::value_parser!(u64).range(1..))]
        t: Option<u64>,
        #[arg(long, default_value_t = 32, value_parser = positive())]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Minimal number of period-t orbits forced by a least period s.
    Bound {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        s: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        t: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Scan the odd-period and even-period count patterns.
    Scan {
        #[arg(long, default_value_t = 5, value_parser = positive())]
        n_max: u32,
        #[arg(long, default_value_t = 63, value_parser = positive())]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// A bad invocation detected after argument parsing.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn piece_cap() -> Result<usize> {
    match std::env::var(PIECE_CAP_ENV) {
        Err(_) => Ok(DEFAULT_PIECE_CAP),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(cap) if cap >= 1 => Ok(cap),
            _ => Err(UsageError(format!("{PIECE_CAP_ENV} must be a positive integer, got {v:?}")).into()),
        },
    }
}

fn csv_text<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn print_json(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// `(index, value)` rows as text, CSV or JSON.
fn emit_column(index: &str, name: &str, values: &[BigUint], format: Format) -> Result<()> {
    match format {
        Format::Text => {
            for (m, v) in (1..).zip(values) {
                println!("{m:>4}  {v}");
            }
        }
        Format::Csv => print!(
            "{}",
            csv_text(&[index, name], (1..).zip(values).map(|(m, v)| [m.to_string(), v.to_string()]))?
        ),
        Format::Json => print_json(&json!({
            "name": name,
            "values": values.iter().map(big_json).collect::<Vec<_>>(),
        }))?,
    }
    Ok(())
}

fn emit_checks(checks: &[Check], format: Format) -> Result<()> {
    match format {
        Format::Text => {
            for c in checks {
                let mark = if c.pass { "PASS" } else { "FAIL" };
                match &c.counterexample {
                    Some(ce) => println!("{mark}  {} [{}]: {ce}", c.property, c.range),
                    None => println!("{mark}  {} [{}]", c.property, c.range),
                }
            }
        }
        Format::Csv => print!(
            "{}",
            csv_text(
                &["property", "range", "pass", "counterexample"],
                checks.iter().map(|c| {
                    [
                        c.property.clone(),
                        c.range.clone(),
                        c.pass.to_string(),
                        c.counterexample.clone().unwrap_or_default(),
                    ]
                }),
            )?
        ),
        Format::Json => print_json(&serde_json::to_value(checks)?)?,
    }
    Ok(())
}

fn status(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn load_map(path: &PathBuf) -> Result<PlMap> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PlMap::from_json(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())).into())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Table { n_max, m_max, format } => {
            let table = build_table(n_max, m_max, Exec::default())?;
            match format {
                Format::Text => print!("{}", table.to_text()),
                Format::Csv => print!("{}", table.to_csv()),
                Format::Json => print_json(&table.to_json())?,
            }
        }
        Command::Count { n, psi, m_max, format } => {
            let kind = if psi { CountKind::Power2 } else { CountKind::for_family(n)? };
            let name = if psi { "psi".to_string() } else { format!("phi{n}") };
            emit_column("m", &name, &orbit_column(kind, m_max)?, format)?;
        }
        Command::Lucas { k_max, format } => emit_column("k", "lucas", &lucas_sequence(k_max), format)?,
        Command::Verify { suite, n, k_max, m_max, map, format } => {
            if map == MapChoice::Fn && n == Some(1) && matches!(suite, verify::Suite::Oracle | verify::Suite::Symbolic) {
                return Err(UsageError("--map fn needs --n >= 2; use --map thm1 for n = 1".into()).into());
            }
            let ranges = verify::Ranges {
                n,
                k_max,
                m_max,
                map,
                piece_cap: piece_cap()?,
            };
            let checks = verify::run(suite, &ranges)?;
            emit_checks(&checks, format)?;
            return Ok(status(all_pass(&checks)));
        }
        Command::Oracle { map, map_file, n, k_max, format } => {
            let cap = piece_cap()?;
            let f = match (&map_file, map) {
                (Some(path), _) => load_map(path)?,
                (None, MapChoice::Thm1) => PlMap::theorem1(),
                (None, MapChoice::Fn) => PlMap::family(n).map_err(|e| UsageError(e.to_string()))?,
            };
            let rows = f.oracle_sweep(k_max, cap, Exec::default())?;
            match format {
                Format::Text => {
                    println!("{:>4}  {:>10}  {:>14}  {:>10}", "k", "pieces", "periodic", "orbits");
                    for r in &rows {
                        println!(
                            "{:>4}  {:>10}  {:>14}  {:>10}",
                            r.k, r.pieces, r.periodic_points, r.minimal_period_orbits
                        );
                    }
                }
                Format::Csv => print!(
                    "{}",
                    csv_text(
                        &["k", "pieces", "periodic_points", "minimal_period_orbits"],
                        rows.iter().map(|r| {
                            [
                                r.k.to_string(),
                                r.pieces.to_string(),
                                r.periodic_points.to_string(),
                                r.minimal_period_orbits.to_string(),
                            ]
                        }),
                    )?
                ),
                Format::Json => print_json(&json!({
                    "map": serde_json::from_str::<Value>(&f.to_json())?,
                    "rows": rows.iter().map(|r| json!({
                        "k": r.k,
                        "pieces": r.pieces,
                        "periodic_points": big_json(&r.periodic_points),
                        "minimal_period_orbits": big_json(&r.minimal_period_orbits),
                    })).collect::<Vec<_>>(),
                }))?,
            }
        }
        Command::Lambda { n, tol, format } => {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(UsageError(format!("--tol must lie in (0, 1), got {tol}")).into());
            }
            let root = dominant_root(n, tol)?;
            let digits = (-tol.log10()).ceil() as usize;
            match format {
                Format::Text => {
                    println!("lambda_{n} = {}", root.decimal(digits));
                    println!("bracket [{}, {}]", root.lo, root.hi);
                }
                Format::Csv => print!(
                    "{}",
                    csv_text(
                        &["n", "lambda", "tol", "lo", "hi"],
                        [[n.to_string(), root.decimal(digits), tol.to_string(), root.lo.to_string(), root.hi.to_string()]],
                    )?
                ),
                Format::Json => print_json(&root.to_json(n, tol, digits))?,
            }
        }
        Command::Order { s, t, m_max, format } => match (s, t) {
            (Some(s), Some(t)) => {
                let rel = match compare(s, t)? {
                    std::cmp::Ordering::Less => "precedes",
                    std::cmp::Ordering::Equal => "equal",
                    std::cmp::Ordering::Greater => "follows",
                };
                match format {
                    Format::Text => match rel {
                        "precedes" => println!("{s} ≺ {t}"),
                        "follows" => println!("{t} ≺ {s}"),
                        _ => println!("{s} = {t}"),
                    },
                    Format::Csv => print!(
                        "{}",
                        csv_text(&["s", "t", "relation"], [[s.to_string(), t.to_string(), rel.to_string()]])?
                    ),
                    Format::Json => print_json(&json!({ "s": s, "t": t, "relation": rel, "precedes": rel == "precedes" }))?,
                }
            }
            _ => {
                let periods = sorted_periods(u64::from(m_max));
                match format {
                    Format::Text => println!(
                        "{}",
                        periods.iter().map(u64::to_string).collect::<Vec<_>>().join(" ≺ ")
                    ),
                    Format::Csv => print!(
                        "{}",
                        csv_text(&["rank", "period"], (1..).zip(&periods).map(|(i, p)| [i.to_string(), p.to_string()]))?
                    ),
                    Format::Json => print_json(&json!({ "m_max": m_max, "order": periods }))?,
                }
            }
        },
        Command::Bound { s, t, format } => {
            let bound = match theorem3_bound(s, t) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(1));
                }
            };
            let status = serde_json::to_value(bound.status)?;
            let status = status.as_str().unwrap_or_default();
            match format {
                Format::Text => println!("{} ({status})", bound.value),
                Format::Csv => print!(
                    "{}",
                    csv_text(&["s", "t", "bound", "status"], [[s.to_string(), t.to_string(), bound.value.to_string(), status.to_string()]])?
                ),
                Format::Json => print_json(&json!({ "s": s, "t": t, "bound": big_json(&bound.value), "status": status }))?,
            }
        }
        Command::Scan { n_max, m_max, format } => {
            let report = scan_conjectures(n_max, m_max, Exec::default())?;
            match format {
                Format::Json => print_json(&serde_json::to_value(&report)?)?,
                Format::Csv => emit_checks(&report.equalities, format)?,
                Format::Text => {
                    emit_checks(&report.equalities, format)?;
                    for f in &report.findings {
                        let note = f.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
                        println!(
                            "SCAN  {} [{}]: {} cases, {} counterexamples{note}",
                            f.statement,
                            f.range,
                            f.cases_checked,
                            f.counterexamples.len()
                        );
                        for c in &f.counterexamples {
                            println!("      {c}");
                        }
                    }
                }
            }
            return Ok(status(all_pass(&report.equalities)));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use relhilb::cycle::{enumerate_cycles_where, parse_expr, CycleClass};
use relhilb::goettsche::{betti_table, plane_relative_series, relative_series};
use relhilb::reduce::{Reducer, Reduction};
use relhilb::verify::{census_vs_series, check_push_orders, relation_rank_check};
use relhilb::{CurveBetti, Execution, SeriesError, SurfaceBetti};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "relhilb", version, about = "Betti numbers and cycle classes of relative Hilbert schemes of points")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Filter {
    All,
    Canonical,
    Normal,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers of the relative Hilbert schemes of a surface relative to a divisor
    Betti {
        /// Betti numbers b0..b4 of the surface
        #[arg(long, num_args = 5, value_names = ["B0", "B1", "B2", "B3", "B4"], default_values_t = [1, 0, 1, 0, 1])]
        surface: Vec<u32>,
        /// Betti numbers b0..b2 of the divisor
        #[arg(long, num_args = 3, value_names = ["B0", "B1", "B2"], default_values_t = [1, 0, 1])]
        curve: Vec<u32>,
        /// Largest number of points
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// List the product classes of length N
    Enumerate {
        n: u32,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
        /// Largest accepted N
        #[arg(long, env = "RELHILB_MAX_N", default_value_t = 10)]
        max_n: u32,
    },
    /// Reduce a cycle expression to normal form and print the certificate
    Reduce {
        expr: String,
        /// Also reduce after pushing each base point first and compare
        #[arg(long)]
        check_order: bool,
    },
    /// Compare the normal-form census and the relation rank with the series
    Verify {
        /// Largest length for the census comparison
        #[arg(long, default_value_t = 4)]
        census: u32,
        /// Largest length for the rank check
        #[arg(long, default_value_t = 3)]
        rank: u32,
    },
    /// Betti numbers of the plane relative to a line, from the closed form
    Plane {
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn failed(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILED,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Betti { surface, curve, n } => {
            let s = SurfaceBetti::new(surface.try_into().expect("clap enforces five values"));
            let d = CurveBetti::new(curve.try_into().expect("clap enforces three values"));
            betti(&mut out, cli.format, s, d, n)
        }
        Command::Enumerate { n, filter, max_n } => enumerate(&mut out, cli.format, n, filter, max_n),
        Command::Reduce { expr, check_order } => reduce(&mut out, cli.format, &expr, check_order),
        Command::Verify { census, rank } => verify(&mut out, cli.format, census, rank),
        Command::Plane { n } => plane(&mut out, cli.format, n),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("relhilb: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::failed(format!("write failed: {e}"))
}

fn print_json(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io_failure)?;
    writeln!(out).map_err(io_failure)
}

fn print_csv(out: &mut impl Write, header: &[String], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io_failure)?;
    for r in rows {
        w.write_record(r).map_err(io_failure)?;
    }
    w.flush().map_err(io_failure)
}

/// Left-aligned columns separated by two spaces.
fn print_table(out: &mut impl Write, header: &[String], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(header)).map_err(io_failure)?;
    for r in rows {
        writeln!(out, "{}", line(r)).map_err(io_failure)?;
    }
    Ok(())
}

fn print_rows(out: &mut impl Write, format: Format, header: &[String], rows: &[Vec<String>]) -> Result<(), Failure> {
    match format {
        Format::Csv => print_csv(out, header, rows),
        _ => print_table(out, header, rows),
    }
}

#[derive(Serialize)]
struct BettiRow {
    n: usize,
    betti: BTreeMap<i64, u64>,
}

fn betti_rows(series: &relhilb::QSeries, n_max: usize) -> Result<Vec<BettiRow>, Failure> {
    (0..=n_max)
        .map(|n| {
            betti_table(series, n)
                .map(|betti| BettiRow { n, betti })
                .map_err(|e| Failure::failed(e.to_string()))
        })
        .collect()
}

fn render_betti(out: &mut impl Write, format: Format, meta: serde_json::Value, rows: &[BettiRow]) -> Result<(), Failure> {
    if format == Format::Json {
        let mut v = meta;
        v["rows"] = serde_json::to_value(rows).map_err(io_failure)?;
        return print_json(out, &v);
    }
    let degrees: BTreeSet<i64> = rows.iter().flat_map(|r| r.betti.keys().copied()).collect();
    let header: Vec<String> = std::iter::once("n".to_string()).chain(degrees.iter().map(|d| format!("H^{d}"))).collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            std::iter::once(r.n.to_string())
                .chain(degrees.iter().map(|d| r.betti.get(d).copied().unwrap_or(0).to_string()))
                .collect()
        })
        .collect();
    print_rows(out, format, &header, &cells)
}

fn betti(out: &mut impl Write, format: Format, s: SurfaceBetti, d: CurveBetti, n_max: usize) -> Result<(), Failure> {
    let series = relative_series(s, d, n_max + 2).map_err(|e| match e {
        SeriesError::NonUnitConstantTerm(_) | SeriesError::InexactDivision { .. } => {
            Failure::usage(format!("the formula does not apply to this Betti input: {e}"))
        }
        other => Failure::failed(other.to_string()),
    })?;
    let rows = betti_rows(&series, n_max)?;
    let meta = json!({
        "surface": [s.b0, s.b1, s.b2, s.b3, s.b4],
        "curve": [d.b0, d.b1, d.b2],
        "n_max": n_max,
        "order": n_max + 2,
    });
    render_betti(out, format, meta, &rows)
}

fn plane(out: &mut impl Write, format: Format, n_max: usize) -> Result<(), Failure> {
    let rows = betti_rows(&plane_relative_series(n_max + 2), n_max)?;
    render_betti(out, format, json!({ "n_max": n_max, "order": n_max + 2 }), &rows)
}

#[derive(Serialize)]
struct CycleRow {
    cycle: CycleClass,
    length: u32,
    tau: i64,
    degree: i64,
}

fn enumerate(out: &mut impl Write, format: Format, n: u32, filter: Filter, max_n: u32) -> Result<(), Failure> {
    if n == 0 || n > max_n {
        return Err(Failure::usage(format!("n must be between 1 and {max_n} (raise with --max-n or RELHILB_MAX_N)")));
    }
    let rows: Vec<CycleRow> = enumerate_cycles_where(n, |c| match filter {
        Filter::All => true,
        Filter::Canonical => c.is_canonical(),
        Filter::Normal => c.is_normal(),
    })
    .into_iter()
    .map(|c| CycleRow {
            length: c.length(),
            tau: c.tau_degree(),
            degree: c.degree(),
            cycle: c,
        })
        .collect();
    if format == Format::Json {
        return print_json(out, &json!({ "n": n, "filter": filter, "count": rows.len(), "cycles": rows }));
    }
    let header: Vec<String> = ["cycle", "length", "tau", "degree"].map(String::from).to_vec();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.cycle.to_string(), r.length.to_string(), r.tau.to_string(), r.degree.to_string()])
        .collect();
    print_rows(out, format, &header, &cells)?;
    if format == Format::Table {
        writeln!(out, "{} cycles", rows.len()).map_err(io_failure)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct OrderCheck {
    consistent: bool,
    failures: Vec<String>,
}

fn reduce(out: &mut impl Write, format: Format, src: &str, check_order: bool) -> Result<(), Failure> {
    let e = parse_expr(src).map_err(|err| Failure::usage(err.to_string()))?;
    if let [a, b, ..] = e.lengths()[..] {
        return Err(Failure::usage(relhilb::RelationError::MixedLengths(a, b).to_string()));
    }
    let reducer = Reducer::default();
    let red: Reduction = reducer.reduce(&e).map_err(|err| Failure::failed(err.to_string()))?;
    let verified = red.verify();
    let order = check_order.then(|| {
        let failures: Vec<String> = e.cycles().flat_map(|c| check_push_orders(&reducer, c)).collect();
        OrderCheck {
            consistent: failures.is_empty(),
            failures,
        }
    });
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(&red).map_err(io_failure)?;
            v["verified"] = json!(verified);
            if let Some(o) = &order {
                v["order_check"] = serde_json::to_value(o).map_err(io_failure)?;
            }
            print_json(out, &v)?;
        }
        Format::Table | Format::Csv => {
            let header: Vec<String> = ["kind", "source", "bubble_index", "mults", "coefficient"].map(String::from).to_vec();
            let cells: Vec<Vec<String>> = red
                .certificate
                .iter()
                .map(|s| {
                    let r = &s.relation;
                    let mults: Vec<String> = r.mults.iter().map(u32::to_string).collect();
                    vec![
                        r.kind.to_string(),
                        r.source.to_string(),
                        r.bubble_index.map(|i| i.to_string()).unwrap_or_default(),
                        mults.join(" "),
                        s.coefficient.to_string(),
                    ]
                })
                .collect();
            if format == Format::Table {
                writeln!(out, "input:  {}", red.input).map_err(io_failure)?;
                writeln!(out, "output: {}", red.output).map_err(io_failure)?;
                writeln!(out, "certificate ({} steps, {}):", red.certificate.len(), if verified { "verified" } else { "NOT verified" })
                    .map_err(io_failure)?;
            }
            print_rows(out, format, &header, &cells)?;
            if let (Format::Table, Some(o)) = (format, &order) {
                writeln!(out, "push order check: {}", if o.consistent { "consistent" } else { "INCONSISTENT" }).map_err(io_failure)?;
                for f in &o.failures {
                    writeln!(out, "  {f}").map_err(io_failure)?;
                }
            }
        }
    }
    if !verified {
        return Err(Failure::failed("certificate does not verify"));
    }
    if order.is_some_and(|o| !o.consistent) {
        return Err(Failure::failed("push orders disagree"));
    }
    Ok(())
}

fn verify(out: &mut impl Write, format: Format, census_max: u32, rank_max: u32) -> Result<(), Failure> {
    if census_max == 0 || rank_max == 0 {
        return Err(Failure::usage("bounds must be at least 1"));
    }
    let exec = Execution::default();
    let census = census_vs_series(census_max, exec);
    let rank: Vec<_> = (1..=rank_max).flat_map(|n| relation_rank_check(n, exec)).collect();
    let passed = census.consistent && rank.iter().all(|r| r.consistent);
    match format {
        Format::Json => print_json(out, &json!({ "passed": passed, "census": census, "rank": rank }))?,
        Format::Table | Format::Csv => {
            let header: Vec<String> = ["check", "n", "degree", "expected", "found", "status"].map(String::from).to_vec();
            let status = |ok: bool| if ok { "ok" } else { "FAIL" }.to_string();
            let mut cells: Vec<Vec<String>> = census
                .rows
                .iter()
                .map(|r| {
                    vec![
                        "census".into(),
                        r.n.to_string(),
                        r.degree.to_string(),
                        r.series.to_string(),
                        r.census.to_string(),
                        status(r.census == r.series),
                    ]
                })
                .collect();
            cells.extend(rank.iter().map(|r| {
                vec![
                    "rank".into(),
                    r.n.to_string(),
                    r.degree.to_string(),
                    r.betti_from_series.to_string(),
                    format!("{}-{}", r.num_cycles, r.relation_rank),
                    status(r.consistent),
                ]
            }));
            print_rows(out, format, &header, &cells)?;
            if format == Format::Table {
                writeln!(out, "{}", if passed { "all checks passed" } else { "verification FAILED" }).map_err(io_failure)?;
            }
        }
    }
    if passed {
        Ok(())
    } else {
        let mut located: Vec<String> = census.discrepancies.iter().map(|r| format!("census n={} degree {}", r.n, r.degree)).collect();
        located.extend(rank.iter().filter(|r| !r.consistent).map(|r| format!("rank n={} degree {}", r.n, r.degree)));
        Err(Failure::failed(format!("inconsistent: {}", located.join(", "))))
    }
}

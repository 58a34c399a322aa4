//! `taut`: compute and reconcile tautological lamination censuses.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use taut_core::census::{self, emit, emit_tables, Format, ReconcileOptions};
use taut_core::lamination::{self, render_svg, RenderStyle, DEFAULT_RENDER_CAP};
use taut_core::table::json_count;
use taut_core::treepoly::{self, DEFAULT_TREE_BUDGET};
use taut_core::words::{self, DEFAULT_WORD_BUDGET};
use taut_core::{EngineSet, TautError};

#[derive(Parser, Debug)]
#[command(
    name = "taut",
    version,
    about = "Length census of tautological laminations"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format of the main document.
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "table",
        env = "TAUT_FORMAT"
    )]
    format: OutputFormat,

    /// Write the main document here instead of stdout.
    #[arg(long, global = true, env = "TAUT_OUTPUT")]
    output: Option<PathBuf>,

    /// Worker threads and tree-engine partitions; never changes output.
    #[arg(long, global = true, default_value_t = 1, env = "TAUT_SHARDS",
          value_parser = clap::value_parser!(u32).range(1..))]
    shards: u32,

    /// Most words an exhaustive count may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_WORD_BUDGET, env = "TAUT_WORD_BUDGET",
          value_parser = positive_u128)]
    word_budget: u128,

    /// Most chords drawn in an SVG.
    #[arg(long, global = true, default_value_t = DEFAULT_RENDER_CAP, env = "TAUT_CHORD_CAP",
          value_parser = positive_usize)]
    chord_cap: usize,

    /// Most trees built by explicit enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_TREE_BUDGET, env = "TAUT_TREE_BUDGET",
          value_parser = positive_u128)]
    tree_budget: u128,

    /// How leaves are drawn.
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "geodesic",
        env = "TAUT_STYLE"
    )]
    style: Style,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
    Table,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
            OutputFormat::Table => Format::Table,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Style {
    Geodesic,
    Straight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Unbordered,
    OneUnbordered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Recursion,
    ClosedForm,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count unbordered or 1-unbordered words of length 0..=max-n.
    Words {
        #[arg(long, value_parser = degree)]
        q: u32,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "one-unbordered")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "recursion")]
        method: Method,
        /// Cross-check every method; exhaustive counts stay within the budget.
        #[arg(long)]
        check: bool,
    },
    /// Census rows 0..=depth from the pinched lamination.
    Lam {
        #[arg(long, value_parser = degree)]
        q: u32,
        #[arg(long)]
        depth: u32,
        /// Also draw the lamination, with pinched components, as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Census rows 0..=depth from tree polynomials.
    Trees {
        #[arg(long, value_parser = degree)]
        q: u32,
        #[arg(long)]
        depth: u32,
        /// Build every tree instead of walking F-sequences.
        #[arg(long)]
        explicit: bool,
        /// Write the tautological tree to this depth as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the tautological tree to this depth as nested JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the engines and reconcile them with each other and the published tables.
    Census {
        #[arg(long, value_parser = degree)]
        q: u32,
        #[arg(long)]
        depth: u32,
        /// `all`, or a comma-separated subset of lamination, trees, words.
        #[arg(long, default_value = "all")]
        engines: String,
        /// Print engine wall times to stderr.
        #[arg(long)]
        timings: bool,
        #[arg(long, hide = true, value_parser = parse_cell)]
        inject_fault: Option<(u32, u32)>,
    },
}

fn degree(s: &str) -> Result<u32, String> {
    let q: u32 = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    if q < 2 {
        return Err(format!("q must be at least 2, got {q}"));
    }
    Ok(q)
}

fn positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("'{s}' is not a positive integer")),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("'{s}' is not a positive integer")),
    }
}

fn parse_cell(s: &str) -> Result<(u32, u32), String> {
    let (n, m) = s.split_once(',').ok_or("expected N,M")?;
    Ok((
        n.trim().parse().map_err(|_| "bad N")?,
        m.trim().parse().map_err(|_| "bad M")?,
    ))
}

/// What a command produced: the main document and the exit status.
struct Outcome {
    document: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let json_errors = matches!(cli.global.format, OutputFormat::Json);
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.shards as usize)
        .build_global()
    {
        eprintln!("warning: could not size the thread pool: {e}");
    }
    match run(&cli)
        .and_then(|o| write_document(cli.global.output.as_deref(), &o.document).map(|_| o.code))
    {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report_error(&e, json_errors);
            ExitCode::from(1)
        }
    }
}

fn report_error(e: &TautError, json: bool) {
    if json {
        let doc = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
        eprintln!("{doc}");
    } else {
        eprintln!("error: {e}");
    }
}

fn write_document(path: Option<&Path>, text: &str) -> Result<(), TautError> {
    let io_err = |e: io::Error| TautError::InvalidParameter(format!("cannot write output: {e}"));
    match path {
        Some(p) => write_file(p, text),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(io_err),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), TautError> {
    fs::write(path, text)
        .map_err(|e| TautError::InvalidParameter(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Outcome, TautError> {
    let g = &cli.global;
    let format = Format::from(g.format);
    match &cli.command {
        Command::Words {
            q,
            max_n,
            kind,
            method,
            check,
        } => {
            if *check {
                return check_words(*q, *max_n, *kind, g.word_budget, format);
            }
            let values = count_words(*q, *max_n, *kind, *method, g.word_budget)?;
            Ok(Outcome {
                document: emit_sequence(&values, format),
                code: 0,
            })
        }
        Command::Lam { q, depth, svg } => {
            let lam = lamination::build_lamination(*q, *depth)?;
            let tables = (0..=*depth)
                .map(|n| lam.census(n))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(path) = svg {
                let pinched = lam.pinch(*depth)?;
                let style = RenderStyle {
                    geodesic: matches!(g.style, Style::Geodesic),
                    max_chords: g.chord_cap,
                    ..RenderStyle::default()
                };
                write_file(path, &render_svg(&lam, Some(&pinched), &style)?)?;
            }
            Ok(Outcome {
                document: emit_tables(&tables, format),
                code: 0,
            })
        }
        Command::Trees {
            q,
            depth,
            explicit,
            dot,
            json,
        } => {
            let tables = if *explicit {
                treepoly::census_explicit(*q, *depth, g.tree_budget)?
            } else {
                treepoly::census_trees_rows(*q, *depth, g.shards as usize)?
            };
            if dot.is_some() || json.is_some() {
                let tree = treepoly::export_tautological_tree(*q, *depth, g.tree_budget)?;
                if let Some(path) = dot {
                    write_file(path, &tree.to_dot())?;
                }
                if let Some(path) = json {
                    let mut text =
                        serde_json::to_string_pretty(&tree.to_json()).expect("serializable");
                    text.push('\n');
                    write_file(path, &text)?;
                }
            }
            Ok(Outcome {
                document: emit_tables(&tables, format),
                code: 0,
            })
        }
        Command::Census {
            q,
            depth,
            engines,
            timings,
            inject_fault,
        } => {
            let engines: EngineSet = engines.parse()?;
            let options = ReconcileOptions {
                shards: g.shards as usize,
                inject_fault: *inject_fault,
            };
            let report = census::reconcile(*q, *depth, engines, &options)?;
            if *timings {
                for (engine, t) in &report.timings {
                    eprintln!("{}: {:.3}s", engine.name(), t.as_secs_f64());
                }
            }
            let mismatches = report.mismatches().count();
            let failed = report.failed_checks().count();
            eprintln!(
                "q={} n<={}: {} cells, {} mismatches, {} failed checks",
                q,
                depth,
                report.cells.len(),
                mismatches,
                failed
            );
            Ok(Outcome {
                document: emit(&report, format),
                code: report.exit_code() as u8,
            })
        }
    }
}

fn count_words(
    q: u32,
    max_n: usize,
    kind: Kind,
    method: Method,
    budget: u128,
) -> Result<Vec<BigUint>, TautError> {
    let seq = match (method, kind) {
        (Method::Recursion, Kind::Unbordered) => {
            words::count_unbordered_recursive(q, max_n)?.values
        }
        (Method::Recursion, Kind::OneUnbordered) => {
            words::count_one_unbordered_recursive(q, max_n)?.values
        }
        (Method::ClosedForm, k) => {
            let series = match k {
                Kind::Unbordered => words::alpha_series(q, max_n)?,
                Kind::OneUnbordered => words::beta_closed_form(q, max_n)?,
            };
            words::series::to_naturals(&series).ok_or_else(|| {
                TautError::Invariant("negative coefficient in a count series".into())
            })?
        }
        (Method::Brute, k) => (0..=max_n)
            .map(|n| match k {
                Kind::Unbordered => words::count_unbordered_brute(q, n, budget),
                Kind::OneUnbordered => words::count_one_unbordered_brute(q, n, budget),
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(seq)
}

fn check_words(
    q: u32,
    max_n: usize,
    kind: Kind,
    budget: u128,
    format: Format,
) -> Result<Outcome, TautError> {
    let reference = count_words(q, max_n, kind, Method::Recursion, budget)?;
    let closed = count_words(q, max_n, kind, Method::ClosedForm, budget)?;
    // exhaustive counts only where the budget allows
    let brute_max = (0..=max_n)
        .take_while(|&n| {
            (q as u128)
                .checked_pow(n as u32)
                .is_some_and(|w| w <= budget)
        })
        .last()
        .unwrap_or(0);
    let brute = count_words(q, brute_max, kind, Method::Brute, budget)?;
    let mut rows = Vec::new();
    let mut agree = true;
    for n in 0..=max_n {
        let b = brute.get(n);
        let ok = closed[n] == reference[n] && b.is_none_or(|b| *b == reference[n]);
        agree &= ok;
        rows.push((n, &reference[n], &closed[n], b, ok));
    }
    let document = match format {
        Format::Csv => {
            let mut out = String::from("n,recursion,closed_form,brute,agree\n");
            for (n, r, c, b, ok) in &rows {
                let b = b.map(|b| b.to_string()).unwrap_or_default();
                out.push_str(&format!("{n},{r},{c},{b},{ok}\n"));
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(n, r, c, b, ok)| {
                    json!({
                        "n": n,
                        "recursion": json_count(r),
                        "closed_form": json_count(c),
                        "brute": b.map(json_count),
                        "agree": ok,
                    })
                })
                .collect();
            let mut s =
                serde_json::to_string_pretty(&json!({ "q": q, "agree": agree, "rows": rows }))
                    .expect("serializable");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut out = String::new();
            for (n, r, c, b, ok) in &rows {
                let b = b.map(|b| b.to_string()).unwrap_or_else(|| "-".into());
                out.push_str(&format!(
                    "{n:>3} {r:>12} {c:>12} {b:>12} {}\n",
                    if *ok { "ok" } else { "MISMATCH" }
                ));
            }
            out
        }
    };
    Ok(Outcome {
        document,
        code: if agree { 0 } else { 2 },
    })
}

fn emit_sequence(values: &[BigUint], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("n,count\n");
            for (n, v) in values.iter().enumerate() {
                out.push_str(&format!("{n},{v}\n"));
            }
            out
        }
        Format::Json => {
            let arr: Vec<Value> = values.iter().map(json_count).collect();
            let mut s = serde_json::to_string(&arr).expect("serializable");
            s.push('\n');
            s
        }
        Format::Table => {
            let text: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            format!("{}\n", text.join(","))
        }
    }
}

//! Runs the census engines side by side and reconciles their tables with
//! each other and with the published values.

mod reference;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use serde_json::{json, Map, Value};

use crate::error::{check_q, Result, TautError};
use crate::lamination;
use crate::table::{format_table, json_count, CensusTable};
use crate::treepoly;
use crate::words;

pub use reference::ReferenceTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Engine {
    Lamination,
    Trees,
    Words,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Lamination => "lamination",
            Engine::Trees => "trees",
            Engine::Words => "words",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which engines to run. The words engine only knows the `m = 0` column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineSet {
    pub lamination: bool,
    pub trees: bool,
    pub words: bool,
}

impl EngineSet {
    pub fn all() -> Self {
        EngineSet {
            lamination: true,
            trees: true,
            words: true,
        }
    }

    pub fn engines(&self) -> Vec<Engine> {
        let mut out = Vec::new();
        if self.lamination {
            out.push(Engine::Lamination);
        }
        if self.trees {
            out.push(Engine::Trees);
        }
        if self.words {
            out.push(Engine::Words);
        }
        out
    }
}

impl FromStr for EngineSet {
    type Err = TautError;

    /// `all`, or a comma-separated subset of `lamination` (`lam`), `trees`,
    /// `words`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "all" {
            return Ok(EngineSet::all());
        }
        let mut set = EngineSet {
            lamination: false,
            trees: false,
            words: false,
        };
        for part in s.split(',').map(str::trim) {
            match part {
                "lamination" | "lam" => set.lamination = true,
                "trees" => set.trees = true,
                "words" => set.words = true,
                _ => {
                    return Err(TautError::InvalidParameter(format!(
                        "unknown engine '{part}'"
                    )))
                }
            }
        }
        if set.engines().is_empty() {
            return Err(TautError::InvalidParameter("no engine selected".into()));
        }
        Ok(set)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconcileOptions {
    /// Parallel partitions inside the tree engine; never changes results.
    pub shards: usize,
    /// Test hook: adds one to the first engine's value at `(n, m)`.
    pub inject_fault: Option<(u32, u32)>,
}

impl Default for ReconcileOptions {
    fn default() -> Self {
        ReconcileOptions {
            shards: 1,
            inject_fault: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
}

/// One `(n, m)` entry with every available value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub n: u32,
    pub m: u32,
    pub values: Vec<(Engine, BigUint)>,
    pub reference: Option<BigUint>,
    pub verdict: Verdict,
}

impl Cell {
    /// The first engine value, or the published one.
    pub fn value(&self) -> Option<&BigUint> {
        self.values
            .first()
            .map(|(_, v)| v)
            .or(self.reference.as_ref())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// Total length and component count.
    Identities,
    /// `N(n, n) = 1` and the zero band.
    Gap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub engine: Engine,
    pub n: u32,
    pub kind: CheckKind,
    /// `None` when the check passed.
    pub failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ReconciliationReport {
    pub q: u32,
    pub n_max: u32,
    pub engines: EngineSet,
    pub cells: Vec<Cell>,
    pub checks: Vec<Check>,
    /// Wall time per engine; never part of the emitted documents.
    pub timings: Vec<(Engine, Duration)>,
    pub reference_checksum: Option<String>,
}

impl ReconciliationReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.verdict == Verdict::Mismatch)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failure.is_some())
    }

    pub fn is_consistent(&self) -> bool {
        self.mismatches().next().is_none() && self.failed_checks().next().is_none()
    }

    /// 0 when consistent, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_consistent() {
            0
        } else {
            2
        }
    }

    /// One table per `n` from the first available value of every cell.
    pub fn tables(&self) -> Vec<CensusTable> {
        (0..=self.n_max)
            .map(|n| {
                let mut t = CensusTable::new(self.q, n);
                for cell in self.cells.iter().filter(|c| c.n == n) {
                    if let Some(v) = cell.value() {
                        t.add(cell.m, v);
                    }
                }
                t
            })
            .collect()
    }
}

/// Runs the selected engines for `n = 0..=n_max` and compares them cell by
/// cell and against the published table when one covers `(q, n)`.
pub fn reconcile(
    q: u32,
    n_max: u32,
    engines: EngineSet,
    options: &ReconcileOptions,
) -> Result<ReconciliationReport> {
    check_q(q, 2)?;
    let reference = ReferenceTable::load(q)?;
    let mut timings = Vec::new();
    let mut results: Vec<(Engine, Vec<CensusTable>)> = Vec::new();
    for engine in engines.engines() {
        let start = Instant::now();
        let tables = run_engine(engine, q, n_max, options)
            .map_err(|e| TautError::Invariant(format!("{engine} engine failed: {e}")))?;
        timings.push((engine, start.elapsed()));
        results.push((engine, tables));
    }
    if let (Some((n, m)), Some((_, tables))) = (options.inject_fault, results.first_mut()) {
        if let Some(t) = tables.get_mut(n as usize) {
            t.add(m, &BigUint::one());
        }
    }

    let mut cells = Vec::new();
    for n in 0..=n_max {
        let width = results
            .iter()
            .filter_map(|(_, t)| t.get(n as usize).map(CensusTable::max_m))
            .fold(n, u32::max);
        for m in 0..=width {
            let values: Vec<(Engine, BigUint)> = results
                .iter()
                .filter(|(e, _)| *e != Engine::Words || m == 0)
                .filter_map(|(e, t)| t.get(n as usize).map(|t| (*e, t.get(m))))
                .collect();
            let published = reference
                .as_ref()
                .filter(|r| r.covers(n))
                .and_then(|r| r.get(n, m))
                .map(BigUint::from);
            let first = values.first().map(|(_, v)| v).or(published.as_ref());
            let agree = values
                .iter()
                .map(|(_, v)| v)
                .chain(published.as_ref())
                .all(|v| Some(v) == first);
            cells.push(Cell {
                n,
                m,
                values,
                reference: published,
                verdict: if agree {
                    Verdict::Match
                } else {
                    Verdict::Mismatch
                },
            });
        }
    }

    let mut checks = Vec::new();
    for (engine, tables) in results.iter().filter(|(e, _)| *e != Engine::Words) {
        for t in tables {
            checks.push(Check {
                engine: *engine,
                n: t.n(),
                kind: CheckKind::Identities,
                failure: t.check_identities().err().map(|e| e.to_string()),
            });
            checks.push(Check {
                engine: *engine,
                n: t.n(),
                kind: CheckKind::Gap,
                failure: t.check_gap().err().map(|e| e.to_string()),
            });
        }
    }

    Ok(ReconciliationReport {
        q,
        n_max,
        engines,
        cells,
        checks,
        timings,
        reference_checksum: reference.map(|r| r.checksum().to_string()),
    })
}

fn run_engine(
    engine: Engine,
    q: u32,
    n_max: u32,
    options: &ReconcileOptions,
) -> Result<Vec<CensusTable>> {
    match engine {
        Engine::Lamination => lamination::census_rows(q, n_max),
        Engine::Trees => treepoly::census_trees_rows(q, n_max, options.shards.max(1)),
        Engine::Words => {
            let column = words::short_column(q, n_max as usize)?;
            Ok(column
                .values
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    let mut t = CensusTable::new(q, n as u32);
                    t.add(0, v);
                    t
                })
                .collect())
        }
    }
}

/// Output document formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl FromStr for Format {
    type Err = TautError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(TautError::UnknownFormat(other.to_string())),
        }
    }
}

/// Census rows as CSV (`q,n,m,count`), a JSON array, or a text table.
pub fn emit_tables(tables: &[CensusTable], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("q,n,m,count\n");
            for t in tables {
                out.push_str(&t.csv_rows());
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = tables.iter().map(CensusTable::to_json).collect();
            let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Table => format_table(tables),
    }
}

/// The reconciled tables, plus the verdict and any disagreement. Timings
/// are left out so identical inputs give identical bytes.
pub fn emit(report: &ReconciliationReport, format: Format) -> String {
    let tables = report.tables();
    match format {
        Format::Csv => emit_tables(&tables, Format::Csv),
        Format::Table => {
            let mut out = format_table(&tables);
            for cell in report.mismatches() {
                out.push_str(&format!("mismatch {}\n", describe_cell(cell)));
            }
            for check in report.failed_checks() {
                out.push_str(&format!(
                    "failed {} {:?} check at n={}: {}\n",
                    check.engine,
                    check.kind,
                    check.n,
                    check.failure.as_deref().unwrap_or_default()
                ));
            }
            out
        }
        Format::Json => {
            let mismatches: Vec<Value> = report
                .mismatches()
                .map(|c| {
                    let mut values = Map::new();
                    for (e, v) in &c.values {
                        values.insert(e.name().to_string(), json_count(v));
                    }
                    if let Some(r) = &c.reference {
                        values.insert("reference".to_string(), json_count(r));
                    }
                    json!({ "n": c.n, "m": c.m, "values": values })
                })
                .collect();
            let failed: Vec<Value> = report
                .failed_checks()
                .map(|c| {
                    json!({
                        "engine": c.engine.name(),
                        "n": c.n,
                        "check": format!("{:?}", c.kind).to_lowercase(),
                        "detail": c.failure,
                    })
                })
                .collect();
            let engines: Vec<&str> = report.engines.engines().iter().map(|e| e.name()).collect();
            let doc = json!({
                "q": report.q,
                "n_max": report.n_max,
                "engines": engines,
                "consistent": report.is_consistent(),
                "reference_checksum": report.reference_checksum,
                "tables": tables.iter().map(CensusTable::to_json).collect::<Vec<_>>(),
                "mismatches": mismatches,
                "failed_checks": failed,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

fn describe_cell(cell: &Cell) -> String {
    let mut parts: Vec<String> = cell
        .values
        .iter()
        .map(|(e, v)| format!("{e}={v}"))
        .collect();
    if let Some(r) = &cell.reference {
        parts.push(format!("reference={r}"));
    }
    format!("n={} m={}: {}", cell.n, cell.m, parts.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_set_parsing() {
        assert_eq!("all".parse::<EngineSet>().unwrap(), EngineSet::all());
        let s: EngineSet = "trees,words".parse().unwrap();
        assert_eq!(s.engines(), vec![Engine::Trees, Engine::Words]);
        assert!("trees,ghost".parse::<EngineSet>().is_err());
        assert!("".parse::<EngineSet>().is_err());
    }

    #[test]
    fn trivial_reconciliation() {
        let r = reconcile(3, 0, EngineSet::all(), &ReconcileOptions::default()).unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.cells.len(), 1);
        assert_eq!(r.tables(), vec![CensusTable::from_u64(3, 0, &[1])]);
    }

    #[test]
    fn small_table_matches_reference() {
        let r = reconcile(4, 6, EngineSet::all(), &ReconcileOptions::default()).unwrap();
        assert!(r.is_consistent());
        assert!(r.cells.iter().all(|c| c.reference.is_some()));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn injected_fault_is_a_mismatch() {
        let options = ReconcileOptions {
            shards: 1,
            inject_fault: Some((3, 1)),
        };
        let r = reconcile(3, 4, EngineSet::all(), &options).unwrap();
        assert_eq!(r.exit_code(), 2);
        let bad: Vec<(u32, u32)> = r.mismatches().map(|c| (c.n, c.m)).collect();
        assert_eq!(bad, vec![(3, 1)]);
        assert!(emit(&r, Format::Table).contains("mismatch n=3 m=1"));
    }

    #[test]
    fn unpublished_degree_still_reconciles() {
        let r = reconcile(6, 4, EngineSet::all(), &ReconcileOptions::default()).unwrap();
        assert!(r.is_consistent());
        assert!(r.reference_checksum.is_none());
    }

    #[test]
    fn formats() {
        let r = reconcile(3, 2, EngineSet::all(), &ReconcileOptions::default()).unwrap();
        let csv = emit(&r, Format::Csv);
        assert!(csv.starts_with("q,n,m,count\n3,0,0,1\n"));
        let json: Value = serde_json::from_str(&emit(&r, Format::Json)).unwrap();
        assert_eq!(json["consistent"], true);
        assert_eq!(json["tables"][2]["counts"]["0"], 3);
        assert!(emit(&r, Format::Table).contains("2 | 3 1 1"));
        assert_eq!(
            "xml".parse::<Format>().unwrap_err().kind(),
            "unknown_format"
        );
    }
}

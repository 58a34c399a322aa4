//! Acceptance suite: one PASS/FAIL line per criterion. All tolerances are
//! zero; every comparison is between exact integers or exact bytes.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use taut_core::census::{emit, emit_tables, reconcile, Format, ReconcileOptions};
use taut_core::lamination::{self, pinch_grid, render_svg, short_leaves, RenderStyle};
use taut_core::treepoly::{
    self, backslide_failures, census_explicit, census_trees_rows, derived_stats,
    increments_failures, properties_failures, walk_trees, DEFAULT_TREE_BUDGET,
};
use taut_core::words::{self, beta_closed_form, digit_sum_series, lacunary_product};
use taut_core::{CensusTable, EngineSet, ReferenceTable};

/// Published ranges; `q = 5` beyond `n = 10` is the stretch row.
const TABLE_RANGES: [(u32, u32); 3] = [(3, 12), (4, 11), (5, 10)];
const STRETCH: (u32, u32) = (5, 11);
const ORACLE_DEPTH: u32 = 5;
const PINCH_TRIALS: usize = 10_000;
const PINCH_SEED: u64 = 0x7a07;

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
    }
}

/// Every census computed along the way, for the gap and identity criteria.
#[derive(Default)]
struct Computed {
    tables: Vec<(&'static str, CensusTable)>,
}

impl Computed {
    fn keep(&mut self, engine: &'static str, tables: &[CensusTable]) {
        self.tables
            .extend(tables.iter().cloned().map(|t| (engine, t)));
    }
}

fn row_u64(t: &CensusTable) -> Vec<u64> {
    t.row().iter().map(|c| c.to_u64().expect("fits")).collect()
}

fn against_reference(
    reference: &ReferenceTable,
    tables: &[CensusTable],
    n_max: u32,
) -> Result<(), String> {
    for n in 0..=n_max {
        let expected = reference.row(n).ok_or(format!("no published row {n}"))?;
        let got = &tables[n as usize];
        if row_u64(got) != row_u64(&expected) {
            return Err(format!(
                "q={} n={n}: got {:?}, published {:?}",
                reference.q(),
                row_u64(got),
                row_u64(&expected)
            ));
        }
    }
    Ok(())
}

fn criterion_1(computed: &mut Computed) -> Outcome {
    let mut notes = Vec::new();
    for (q, n_max) in TABLE_RANGES.into_iter().chain([STRETCH]) {
        let reference = ReferenceTable::load(q).unwrap().unwrap();
        let t0 = Instant::now();
        let lam = match lamination::census_rows(q, n_max) {
            Ok(t) => t,
            Err(e) => return fail(format!("lamination q={q}: {e}")),
        };
        let t_lam = t0.elapsed();
        let t0 = Instant::now();
        let trees = match census_trees_rows(q, n_max, 1) {
            Ok(t) => t,
            Err(e) => return fail(format!("trees q={q}: {e}")),
        };
        let t_trees = t0.elapsed();
        for (engine, tables) in [("lamination", &lam), ("trees", &trees)] {
            if let Err(e) = against_reference(&reference, tables, n_max) {
                return fail(format!("{engine}: {e}"));
            }
        }
        computed.keep("lamination", &lam);
        computed.keep("trees", &trees);
        notes.push(format!(
            "q={q} n<={n_max} lam {:.2}s trees {:.2}s",
            t_lam.as_secs_f64(),
            t_trees.as_secs_f64()
        ));
    }
    pass(notes.join(", "))
}

fn criterion_2(computed: &Computed) -> Outcome {
    let mut compared = 0;
    for (q, n_max) in TABLE_RANGES.into_iter().chain([STRETCH]) {
        let column = words::short_column(q, n_max as usize).unwrap();
        let reference = ReferenceTable::load(q).unwrap().unwrap();
        for n in 0..=n_max {
            let published = BigUint::from(reference.get(n, 0).unwrap());
            if column.values[n as usize] != published {
                return fail(format!(
                    "q={q} n={n}: recursion {} vs table {published}",
                    column.values[n as usize]
                ));
            }
        }
        for (_, t) in computed
            .tables
            .iter()
            .filter(|(e, t)| *e == "lamination" && t.q() == q && t.n() <= n_max)
        {
            if t.get(0) != column.values[t.n() as usize] {
                return fail(format!("q={q} n={}: lamination column differs", t.n()));
            }
            compared += 1;
        }
    }
    let mut checked = 0;
    for (q, n_max) in [(3u32, 12usize), (4, 9), (5, 8)] {
        let b = words::count_one_unbordered_recursive(q, n_max).unwrap();
        for n in 0..=n_max {
            let brute =
                words::count_one_unbordered_brute(q, n, words::DEFAULT_WORD_BUDGET).unwrap();
            if brute != b.values[n] {
                return fail(format!(
                    "q={q} n={n}: brute {brute} vs recursion {}",
                    b.values[n]
                ));
            }
            checked += 1;
        }
    }
    pass(format!(
        "{compared} lamination rows; {checked} exhaustive counts"
    ))
}

fn criterion_3() -> Outcome {
    for q in 2..=10 {
        let closed = beta_closed_form(q, 64).unwrap();
        let rec = words::count_one_unbordered_recursive(q, 64).unwrap();
        for n in 0..=64 {
            if closed.coeffs[n] != BigInt::from(rec.values[n].clone()) {
                return fail(format!(
                    "q={q} n={n}: closed form {} vs recursion {}",
                    closed.coeffs[n], rec.values[n]
                ));
            }
        }
        let lhs = digit_sum_series(q, 64);
        let rhs = lacunary_product(q, 64);
        if lhs.coeffs[..=64] != rhs.coeffs[..=64] {
            return fail(format!(
                "q={q}: digit-sum series differs from the lacunary product"
            ));
        }
        // the series is independent of how it was built
        for n in 0..=64u64 {
            let expected = BigInt::from(-(q as i64)).pow(common::binary_digit_sum(n));
            if lhs.coeffs[n as usize] != expected {
                return fail(format!("q={q} n={n}: digit-sum coefficient"));
            }
        }
    }
    pass("q in 2..=10, n <= 64")
}

fn criterion_4(computed: &Computed) -> Outcome {
    for (engine, t) in &computed.tables {
        if let Err(e) = t.check_gap() {
            return fail(format!("{engine} q={} n={}: {e}", t.q(), t.n()));
        }
    }
    pass(format!("{} tables", computed.tables.len()))
}

fn criterion_5(computed: &Computed) -> Outcome {
    for (engine, t) in &computed.tables {
        if let Err(e) = t.check_identities() {
            return fail(format!("{engine} q={} n={}: {e}", t.q(), t.n()));
        }
    }
    pass(format!("{} tables", computed.tables.len()))
}

#[derive(Default)]
struct LemmaTally {
    trees: u64,
    sequences: u64,
    tree_lemmas: u64,
    properties: u64,
    increments: u64,
    strict: u64,
    weak: u64,
    membership: u64,
    first_strict: Option<(u32, Vec<u32>, u32)>,
}

fn criterion_6(computed: &mut Computed) -> Outcome {
    let rows = ORACLE_DEPTH;
    let mut tally = LemmaTally::default();
    for q in 3..=5 {
        let explicit = census_explicit(q, rows, DEFAULT_TREE_BUDGET).unwrap();
        let gamma = census_trees_rows(q, rows, 1).unwrap();
        let lam = lamination::census_rows(q, rows).unwrap();
        for n in 0..=rows as usize {
            let (a, b, c) = (row_u64(&explicit[n]), row_u64(&gamma[n]), row_u64(&lam[n]));
            if a != b || b != c {
                return fail(format!(
                    "q={q} n={n}: explicit {a:?}, gamma {b:?}, lamination {c:?}"
                ));
            }
        }
        computed.keep("explicit", &explicit);
        walk_trees(q, rows + 1, DEFAULT_TREE_BUDGET, &mut |tree| {
            tally.trees += 1;
            if !tree.lemma_failures().is_empty() || !tree.validate().is_empty() {
                tally.tree_lemmas += 1;
            }
            let f = tree.f_sequence();
            let ell: Vec<u64> = tree
                .critical_vein()
                .iter()
                .map(|&v| tree.vertices()[v as usize].length)
                .collect();
            tally.sequences += 1;
            if !properties_failures(&f, &ell).is_empty() {
                tally.properties += 1;
            }
            let stats = derived_stats(&f, q).unwrap();
            if !increments_failures(&f, &stats).is_empty() {
                tally.increments += 1;
            }
            let back = backslide_failures(&f, &stats);
            if !back.strict.is_empty() {
                tally.strict += 1;
                if tally.first_strict.is_none() {
                    tally.first_strict = Some((q, f.values().to_vec(), back.strict[0]));
                }
            }
            tally.weak += (!back.weak.is_empty()) as u64;
            tally.membership += (!back.membership.is_empty()) as u64;
        })
        .unwrap();
    }
    let summary = format!(
        "{} trees; failures: tree lemmas {}, properties of F {}, increments {}, backslide F(i+1)<F(i) {}, F(i+1)<=F(i) {}, membership {}",
        tally.trees, tally.tree_lemmas, tally.properties, tally.increments, tally.strict, tally.weak, tally.membership
    );
    let structural =
        tally.tree_lemmas + tally.properties + tally.increments + tally.weak + tally.membership;
    if structural == 0 && tally.strict == 0 {
        return pass(format!(
            "engines agree for q in 3..=5, n <= {rows}; {summary}"
        ));
    }
    let example = tally
        .first_strict
        .map(|(q, f, i)| format!("; first strict counterexample q={q} F={f:?} at i={i}"))
        .unwrap_or_default();
    fail(format!(
        "engines agree for q in 3..=5, n <= {rows}; {summary}{example}"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(PINCH_SEED);
    let mut shared_trials = 0;
    for trial in 0..PINCH_TRIALS {
        let grid = rand::Rng::gen_range(&mut rng, 2..=64u64);
        let shared = trial % 2 == 0;
        let chords = common::random_noncrossing(&mut rng, grid, shared);
        let (lengths, _) = match pinch_grid(grid, &chords, false) {
            Ok(r) => r,
            Err(e) => return fail(format!("trial {trial}: {e}")),
        };
        let (visible, hidden) = common::separation_oracle(grid, &chords);
        let mut expected = vec![0u64; hidden];
        expected.extend(visible);
        let mut got = lengths;
        got.sort_unstable();
        if got != expected {
            return fail(format!(
                "trial {trial} grid {grid} chords {chords:?}: pinch {got:?}, oracle {expected:?}"
            ));
        }
        shared_trials += shared as usize;
    }
    let mut bijections = 0;
    for (q, n_max) in TABLE_RANGES {
        let column = words::short_column(q, n_max as usize).unwrap();
        for n in 1..=n_max {
            let short = short_leaves(q, n).unwrap().len();
            if BigUint::from(short) != column.values[n as usize] {
                return fail(format!(
                    "q={q} n={n}: {short} short leaves vs N(n,0) {}",
                    column.values[n as usize]
                ));
            }
            bijections += 1;
        }
    }
    pass(format!(
        "{PINCH_TRIALS} random systems ({shared_trials} with shared ends); short leaves match N(n,0) on {bijections} rows"
    ))
}

fn with_threads<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(job)
}

fn criterion_8() -> Outcome {
    let documents = |shards: usize| -> Vec<Vec<u8>> {
        with_threads(shards, || {
            let mut out = Vec::new();
            for (q, n) in [(3, 9), (4, 7), (5, 6)] {
                let options = ReconcileOptions {
                    shards,
                    inject_fault: None,
                };
                let report = reconcile(q, n, EngineSet::all(), &options).unwrap();
                for format in [Format::Csv, Format::Json, Format::Table] {
                    out.push(emit(&report, format).into_bytes());
                }
                let trees = census_trees_rows(q, n, shards).unwrap();
                out.push(emit_tables(&trees, Format::Json).into_bytes());
                let lam = lamination::build_lamination(q, n.min(6)).unwrap();
                let pinched = lam.pinch(n.min(6)).unwrap();
                out.push(
                    render_svg(&lam, Some(&pinched), &RenderStyle::default())
                        .unwrap()
                        .into_bytes(),
                );
                let tree = treepoly::export_tautological_tree(q, 4, DEFAULT_TREE_BUDGET).unwrap();
                out.push(tree.to_dot().into_bytes());
                out.push(tree.to_json().to_string().into_bytes());
            }
            out
        })
    };
    let baseline = documents(1);
    for shards in [1, 2, 3, 8] {
        let again = documents(shards);
        if let Some(i) = (0..baseline.len()).find(|&i| baseline[i] != again[i]) {
            return fail(format!("document {i} differs with {shards} shards"));
        }
    }
    let bytes: usize = baseline.iter().map(Vec::len).sum();
    pass(format!(
        "{} documents, {bytes} bytes, identical over repeats and shards 1, 2, 3, 8",
        baseline.len()
    ))
}

fn timed(check: impl FnOnce() -> Outcome) -> (Outcome, f64) {
    let t0 = Instant::now();
    let outcome = check();
    (outcome, t0.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let mut computed = Computed::default();
    let c1 = timed(|| criterion_1(&mut computed));
    let c2 = timed(|| criterion_2(&computed));
    let c3 = timed(criterion_3);
    // the gap and identity checks also cover the explicit censuses
    let c6 = timed(|| criterion_6(&mut computed));
    let c4 = timed(|| criterion_4(&computed));
    let c5 = timed(|| criterion_5(&computed));
    let c7 = timed(criterion_7);
    let c8 = timed(criterion_8);
    let names = [
        "table reproduction",
        "recursive formula",
        "closed form",
        "gap theorem",
        "structural identities",
        "three-way oracle and lemmas",
        "pinch correctness",
        "determinism",
    ];
    let mut failures = 0;
    for (i, (outcome, secs)) in [c1, c2, c3, c4, c5, c6, c7, c8].into_iter().enumerate() {
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        failures += (!outcome.pass) as usize;
        println!(
            "{verdict} criterion {} ({}, {secs:.1}s): {}",
            i + 1,
            names[i],
            outcome.detail
        );
    }
    if computed
        .tables
        .iter()
        .any(|(_, t)| t.total_count().is_zero())
    {
        println!("FAIL sanity: an empty census was computed");
        failures += 1;
    }
    println!(
        "acceptance: {} of 8 criteria pass",
        8usize.saturating_sub(failures)
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

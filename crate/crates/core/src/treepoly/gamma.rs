//! The option digraph on the critical vein and the weighted enumeration it
//! drives.
//!
//! Vertex `i` stands for the critical vertex `c_i`. Its out-edges, with
//! multiplicity, are the children of `c_i` identified with their images
//! under `F`. Extending a tree of depth `i` picks one out-edge of `F(i)`,
//! whose target becomes `F(i+1)`; the edges of `i` are then one edge to
//! `i + 1` plus two copies of every other edge of `F(i)`. The number of
//! trees with a given F-sequence is the product of the chosen multiplicities.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{check_q, Result, TautError};
use crate::table::CensusTable;

/// Out-edges as `(target, multiplicity)`, sorted by target.
pub type Edges = Vec<(u32, u64)>;

/// The digraph after `depth` steps: vertices `0..=depth`, with the edges of
/// every vertex but the last fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaState {
    q: u32,
    ell: Vec<u64>,
    f: Vec<u32>,
    edges: Vec<Edges>,
}

impl GammaState {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn depth(&self) -> u32 {
        self.f.len() as u32 - 1
    }

    pub fn ell(&self) -> &[u64] {
        &self.ell
    }

    pub fn f_values(&self) -> &[u32] {
        &self.f
    }

    /// Edges of `v`; `None` for the last vertex, whose edges depend on the
    /// next step.
    pub fn edges(&self, v: u32) -> Option<&Edges> {
        self.edges.get(v as usize)
    }

    /// Targets available to the next step, with multiplicities.
    pub fn next_options(&self) -> &Edges {
        &self.edges[*self.f.last().unwrap() as usize]
    }

    pub fn out_degree(&self, v: u32) -> Option<u64> {
        self.edges(v).map(|e| e.iter().map(|&(_, m)| m).sum())
    }

    /// The out-degree of every fixed vertex is `(q-2) l(v) + 1`.
    pub fn check_invariants(&self) -> Result<()> {
        for (v, e) in self.edges.iter().enumerate() {
            let degree: u64 = e.iter().map(|&(_, m)| m).sum();
            let expected = (self.q as u64 - 2) * self.ell[v] + 1;
            if degree != expected {
                return Err(TautError::Invariant(format!(
                    "vertex {v} has out-degree {degree}, expected {expected}"
                )));
            }
            if e.iter().any(|&(t, m)| m == 0 || t as usize > v + 1) {
                return Err(TautError::Invariant(format!(
                    "vertex {v} has an invalid edge"
                )));
            }
            if v > 0
                && e.iter()
                    .any(|&(t, m)| (t as usize == v + 1) != (m % 2 == 1))
            {
                return Err(TautError::Invariant(format!(
                    "vertex {v} breaks edge parity"
                )));
            }
        }
        Ok(())
    }
}

/// The depth 1 state: `l = (1, 2)`, `F = (0, 0)`, root edges `{0: q-2, 1: 1}`.
pub fn gamma_seed(q: u32) -> Result<GammaState> {
    check_q(q, 2)?;
    let mut root = Vec::new();
    if q > 2 {
        root.push((0, q as u64 - 2));
    }
    root.push((1, 1));
    Ok(GammaState {
        q,
        ell: vec![1, 2],
        f: vec![0, 0],
        edges: vec![root],
    })
}

/// Fills `out` with the edges of `i` given the edges of `F(i)` and the
/// chosen target.
fn derive_edges(source: &Edges, target: u32, i: u32, out: &mut Edges) -> Result<()> {
    out.clear();
    for &(t, m) in source {
        let m = if t == target { m - 1 } else { m };
        if m > 0 {
            let doubled = m
                .checked_mul(2)
                .ok_or_else(|| TautError::TooLarge("edge multiplicity".into()))?;
            out.push((t, doubled));
        }
    }
    out.push((i + 1, 1));
    Ok(())
}

/// Extends by the edge `F(i) -> target`.
pub fn gamma_step(state: &GammaState, target: u32) -> Result<GammaState> {
    let i = state.depth();
    let source = state.next_options();
    if !source.iter().any(|&(t, m)| t == target && m > 0) {
        return Err(TautError::ZeroMultiplicity {
            vertex: *state.f.last().unwrap(),
            target,
        });
    }
    let mut edges = Vec::with_capacity(source.len() + 1);
    derive_edges(source, target, i, &mut edges)?;
    let mut next = state.clone();
    next.edges.push(edges);
    next.f.push(target);
    let ell = state.ell[target as usize]
        .checked_mul(2)
        .ok_or_else(|| TautError::TooLarge("vertex length".into()))?;
    next.ell.push(ell);
    Ok(next)
}

/// Receives `(F, l, weight)` for each visited F-sequence.
pub type Visit<'a> = dyn FnMut(&[u32], &[u64], u128) + 'a;

/// Depth-first walk with reusable buffers. `visit` receives the state at
/// every depth `1..=max_depth` with the number of trees it stands for.
struct Walker<'a> {
    max_depth: usize,
    ell: Vec<u64>,
    f: Vec<u32>,
    edges: Vec<Edges>,
    visit: &'a mut Visit<'a>,
}

impl Walker<'_> {
    fn from_state<'v>(state: &GammaState, max_depth: u32, visit: &'v mut Visit<'v>) -> Walker<'v> {
        let size = max_depth as usize + 1;
        let mut w = Walker {
            max_depth: max_depth as usize,
            ell: vec![0; size + 1],
            f: vec![0; size + 1],
            edges: vec![Vec::new(); size],
            visit,
        };
        let d = state.depth() as usize;
        w.ell[..=d].copy_from_slice(&state.ell);
        w.f[..=d].copy_from_slice(&state.f);
        for (slot, e) in w.edges.iter_mut().zip(&state.edges) {
            slot.clone_from(e);
        }
        w
    }

    fn run(&mut self, i: usize, weight: u128) -> Result<()> {
        (self.visit)(&self.f[..=i], &self.ell[..=i], weight);
        if i == self.max_depth {
            return Ok(());
        }
        let j = self.f[i] as usize;
        for k in 0..self.edges[j].len() {
            let (target, mult) = self.edges[j][k];
            let mut buf = std::mem::take(&mut self.edges[i]);
            derive_edges(&self.edges[j], target, i as u32, &mut buf)?;
            self.edges[i] = buf;
            self.f[i + 1] = target;
            self.ell[i + 1] = self.ell[target as usize]
                .checked_mul(2)
                .ok_or_else(|| TautError::TooLarge("vertex length".into()))?;
            let w = weight
                .checked_mul(mult as u128)
                .ok_or_else(|| TautError::TooLarge("path weight".into()))?;
            self.run(i + 1, w)?;
        }
        Ok(())
    }
}

/// Calls `visit(F, l, weight)` for every F-sequence of depth
/// `1..=max_depth`, in depth-first order.
pub fn walk_gamma(q: u32, max_depth: u32, visit: &mut Visit<'_>) -> Result<()> {
    let seed = gamma_seed(q)?;
    if max_depth == 0 {
        return Ok(());
    }
    Walker::from_state(&seed, max_depth, visit).run(1, 1)
}

/// Number of trees of the given depth with each F-sequence.
pub fn fsequence_weights(q: u32, depth: u32) -> Result<BTreeMap<Vec<u32>, u128>> {
    let mut out = BTreeMap::new();
    walk_gamma(q, depth, &mut |f, _, w| {
        if f.len() == depth as usize + 1 {
            *out.entry(f.to_vec()).or_insert(0) += w;
        }
    })?;
    Ok(out)
}

/// Per-row, per-bucket tallies: trees of depth `d` land in row `d - 1`,
/// bucket `log2 l(F(d))`.
#[derive(Clone)]
struct Tally {
    rows: Vec<Vec<u128>>,
    overflow: bool,
}

impl Tally {
    fn new(n_max: u32) -> Self {
        Tally {
            rows: (0..=n_max).map(|n| vec![0; n as usize + 1]).collect(),
            overflow: false,
        }
    }

    fn record(&mut self, f: &[u32], ell: &[u64], weight: u128) {
        let d = f.len() - 1;
        let len = ell[f[d] as usize];
        let m = len.trailing_zeros() as usize;
        let row = &mut self.rows[d - 1];
        if m >= row.len() {
            row.resize(m + 1, 0);
        }
        match row[m].checked_add(weight) {
            Some(v) => row[m] = v,
            None => self.overflow = true,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.overflow |= other.overflow;
        for (a, b) in self.rows.iter_mut().zip(other.rows) {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                match x.checked_add(y) {
                    Some(v) => *x = v,
                    None => self.overflow = true,
                }
            }
        }
        self
    }

    fn into_tables(self, q: u32) -> Result<Vec<CensusTable>> {
        if self.overflow {
            return Err(TautError::TooLarge("census count exceeds 128 bits".into()));
        }
        Ok(self
            .rows
            .into_iter()
            .enumerate()
            .map(|(n, row)| {
                CensusTable::from_counts(q, n as u32, row.into_iter().map(BigUint::from))
            })
            .collect())
    }
}

/// `N_q(n, m)` from the option digraph.
pub fn census_trees(q: u32, n: u32) -> Result<CensusTable> {
    Ok(census_trees_rows(q, n, 1)?.pop().expect("at least one row"))
}

/// Rows `n = 0..=n_max` from one walk. With `shards > 1` the walk is split
/// at a shallow prefix depth and the subtrees run on the rayon pool; the
/// result does not depend on `shards`.
pub fn census_trees_rows(q: u32, n_max: u32, shards: usize) -> Result<Vec<CensusTable>> {
    let max_depth = n_max + 1;
    let seed = gamma_seed(q)?;
    if shards <= 1 {
        let mut tally = Tally::new(n_max);
        Walker::from_state(&seed, max_depth, &mut |f, l, w| tally.record(f, l, w)).run(1, 1)?;
        return tally.into_tables(q);
    }
    // breadth-first expansion until there is enough work to spread
    let mut prefix_tally = Tally::new(n_max);
    let mut frontier = vec![(seed, 1u128)];
    while frontier.len() < 8 * shards && (frontier[0].0.depth()) < max_depth {
        let mut next = Vec::new();
        for (state, weight) in &frontier {
            prefix_tally.record(&state.f, &state.ell, *weight);
            for &(target, mult) in state.next_options() {
                let w = weight
                    .checked_mul(mult as u128)
                    .ok_or_else(|| TautError::TooLarge("path weight".into()))?;
                next.push((gamma_step(state, target)?, w));
            }
        }
        frontier = next;
    }
    let chunk = frontier.len().div_ceil(shards);
    let tallies = frontier
        .par_chunks(chunk)
        .map(|states| {
            let mut tally = Tally::new(n_max);
            for (state, weight) in states {
                Walker::from_state(state, max_depth, &mut |f, l, w| tally.record(f, l, w))
                    .run(state.depth() as usize, *weight)?;
            }
            Ok(tally)
        })
        .collect::<Result<Vec<_>>>()?;
    tallies
        .into_iter()
        .fold(prefix_tally, Tally::merge)
        .into_tables(q)
}

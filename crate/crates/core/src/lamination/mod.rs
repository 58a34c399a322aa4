//! The normalized tautological lamination and its length census.
//!
//! [`depth_leaves`] builds the depth `n` leaves digit by digit, [`pinch`]
//! collapses the circle along a set of unlinked chords, and [`census`]
//! tabulates the component lengths of the circle pinched along all leaves of
//! depth `<= n`.

mod leaves;
mod pinch;
mod point;
mod render;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_q, pow_u64, Result, TautError};
use crate::table::CensusTable;

pub use leaves::{depth_leaves_raw, x_word, Leaf};
pub use pinch::{pinch, pinch_grid, Component, PinchResult};
pub use point::{links, links_on_grid, Chord, CirclePoint, Tick};
pub use render::{render_svg, RenderStyle, DEFAULT_RENDER_CAP};

use pinch::EndIndex;

/// Pairwise link checks are exhaustive up to this many chords.
pub const DEFAULT_FULL_CHECK_MAX: usize = 2000;
/// Random pairs checked above the exhaustive limit.
pub const DEFAULT_SAMPLED_PAIRS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub full_check_max: usize,
    pub sampled_pairs: usize,
    /// Seed of the sampled check; fixed so validation is reproducible.
    pub seed: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            full_check_max: DEFAULT_FULL_CHECK_MAX,
            sampled_pairs: DEFAULT_SAMPLED_PAIRS,
            seed: 0x7a75_7431,
        }
    }
}

/// Leaves of depth `1..=depth`, each level stored compactly on its own grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lamination {
    q: u32,
    depth: u32,
    levels: Vec<Vec<Leaf>>,
}

impl Lamination {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Leaves of depth `k`, `1 <= k <= depth`, on the `q^k` grid.
    pub fn level(&self, k: u32) -> &[Leaf] {
        &self.levels[k as usize - 1]
    }

    pub fn chord_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Typed chords, shallowest first.
    pub fn chords(&self) -> impl Iterator<Item = Chord> + '_ {
        let q = self.q;
        self.levels.iter().enumerate().flat_map(move |(i, level)| {
            let k = i as u32 + 1;
            level.iter().map(move |leaf| leaf_chord(q, k, leaf))
        })
    }

    /// All chords with endpoints lifted to the `q^n` grid, `n <= depth`.
    fn for_each_lifted(&self, n: u32, sink: &mut dyn FnMut(u32, u32)) {
        for (i, level) in self.levels.iter().enumerate().take(n as usize) {
            let factor = self.q.pow(n - (i as u32 + 1));
            for leaf in level {
                sink(leaf.x * factor, leaf.y * factor);
            }
        }
    }

    /// Chord `index` in shallowest-first order, lifted to the full-depth grid.
    fn lifted(&self, mut index: usize) -> (u64, u64) {
        for (i, level) in self.levels.iter().enumerate() {
            if index < level.len() {
                let factor = (self.q as u64).pow(self.depth - (i as u32 + 1));
                let leaf = level[index];
                return (leaf.x as u64 * factor, leaf.y as u64 * factor);
            }
            index -= level.len();
        }
        panic!("chord index out of range")
    }

    /// Pairwise-unlinked check: exhaustive up to `full_check_max` chords,
    /// random pairs above.
    pub fn validate_unlinked(&self, options: &BuildOptions) -> Result<()> {
        let count = self.chord_count();
        let report = |a: (u64, u64), b: (u64, u64)| {
            Err(TautError::Linked(format!(
                "leaves {a:?} and {b:?} on the {}^{} grid",
                self.q, self.depth
            )))
        };
        if count <= options.full_check_max {
            let pairs: Vec<_> = (0..count).map(|i| self.lifted(i)).collect();
            for i in 0..count {
                for j in i + 1..count {
                    if links_on_grid(pairs[i], pairs[j]) {
                        return report(pairs[i], pairs[j]);
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            for _ in 0..options.sampled_pairs {
                let a = self.lifted(rng.gen_range(0..count));
                let b = self.lifted(rng.gen_range(0..count));
                if links_on_grid(a, b) {
                    return report(a, b);
                }
            }
        }
        Ok(())
    }

    /// Pinches along all leaves of depth `<= n`, with component details.
    pub fn pinch(&self, n: u32) -> Result<PinchResult> {
        let (lengths, components) = self.pinch_with(n, true)?;
        Ok(PinchResult {
            q: self.q,
            scale: n,
            lengths,
            components,
        })
    }

    fn pinch_with(&self, n: u32, detail: bool) -> Result<(Vec<u64>, Vec<Component>)> {
        let index = self.end_index(n)?;
        let mut lengths = Vec::new();
        let mut components = Vec::new();
        index.scan(detail, |len, comp| {
            lengths.push(len);
            if detail {
                components.push(comp);
            }
        })?;
        Ok((lengths, components))
    }

    fn end_index(&self, n: u32) -> Result<EndIndex> {
        if n > self.depth {
            return Err(TautError::InvalidParameter(format!(
                "depth {n} exceeds the built depth {}",
                self.depth
            )));
        }
        let grid = pow_u64(self.q, n)?;
        EndIndex::build(grid, |sink| self.for_each_lifted(n, sink))
    }

    /// `N_q(n, m)` for the leaves of depth `<= n`.
    pub fn census(&self, n: u32) -> Result<CensusTable> {
        let index = self.end_index(n)?;
        let mut histogram = vec![0u64; 64];
        let mut failure = None;
        index.scan(false, |len, _| {
            if len.is_zero() || !len.is_power_of_two() {
                failure.get_or_insert(len);
            } else {
                histogram[len.trailing_zeros() as usize] += 1;
            }
        })?;
        if let Some(length) = failure {
            return Err(TautError::NotPowerOfTwo { length, n });
        }
        let mut table = CensusTable::new(self.q, n);
        for (m, &c) in histogram.iter().enumerate() {
            if c > 0 {
                table.add_u64(m as u32, c);
            }
        }
        Ok(table)
    }
}

fn leaf_chord(q: u32, depth: u32, leaf: &Leaf) -> Chord {
    let x = CirclePoint::exact(q, depth, leaf.x as u64).expect("leaf numerator on grid");
    let y = CirclePoint::exact(q, depth, leaf.y as u64).expect("leaf numerator on grid");
    Chord::new(x, y, depth, leaf.leaf_type(q)).expect("leaf endpoints distinct")
}

/// The depth `n` leaves as typed chords with exact endpoints.
pub fn depth_leaves(q: u32, n: u32) -> Result<Vec<Chord>> {
    Ok(depth_leaves_raw(q, n)?
        .iter()
        .map(|leaf| leaf_chord(q, n, leaf))
        .collect())
}

/// All leaves of depth `1..=n`, validated with the default options.
pub fn build_lamination(q: u32, n: u32) -> Result<Lamination> {
    build_lamination_with(q, n, &BuildOptions::default())
}

pub fn build_lamination_with(q: u32, n: u32, options: &BuildOptions) -> Result<Lamination> {
    check_q(q, 2)?;
    let levels = (1..=n)
        .map(|k| depth_leaves_raw(q, k))
        .collect::<Result<Vec<_>>>()?;
    let lamination = Lamination {
        q,
        depth: n,
        levels,
    };
    lamination.validate_unlinked(options)?;
    Ok(lamination)
}

/// Builds without the pairwise check; pinching still rejects crossings.
pub fn build_lamination_unchecked(q: u32, n: u32) -> Result<Lamination> {
    check_q(q, 2)?;
    let levels = (1..=n)
        .map(|k| depth_leaves_raw(q, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(Lamination {
        q,
        depth: n,
        levels,
    })
}

/// `N_q(n, m)` from the lamination.
pub fn census(q: u32, n: u32) -> Result<CensusTable> {
    build_lamination(q, n)?.census(n)
}

/// Rows `n = 0..=n_max` from one lamination build.
pub fn census_rows(q: u32, n_max: u32) -> Result<Vec<CensusTable>> {
    let lamination = build_lamination(q, n_max)?;
    (0..=n_max).map(|n| lamination.census(n)).collect()
}

/// Depth `n` leaves whose endpoints are one grid unit apart.
pub fn short_leaves(q: u32, n: u32) -> Result<Vec<Chord>> {
    Ok(depth_leaves_raw(q, n)?
        .iter()
        .filter(|l| l.is_short())
        .map(|leaf| leaf_chord(q, n, leaf))
        .collect())
}

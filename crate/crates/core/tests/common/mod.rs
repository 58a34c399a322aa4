//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;

/// Chords `(a, b)` with `a < b` cross iff exactly one end of one lies
/// strictly inside the other.
pub fn cross(c: (u64, u64), d: (u64, u64)) -> bool {
    let inside = |x: u64, (a, b): (u64, u64)| a < x && x < b;
    let shared = c.0 == d.0 || c.0 == d.1 || c.1 == d.0 || c.1 == d.1;
    !shared && (inside(d.0, c) != inside(d.1, c))
}

/// A random noncrossing chord system on `grid` points.
///
/// Chords are grown by picking an interval between existing ends and
/// nesting a new chord in it. Without `shared`, no two chords touch.
pub fn random_noncrossing<R: Rng>(rng: &mut R, grid: u64, shared: bool) -> Vec<(u64, u64)> {
    let mut chords: Vec<(u64, u64)> = Vec::new();
    let attempts = rng.gen_range(0..=2 * grid);
    for _ in 0..attempts {
        let a = rng.gen_range(0..grid);
        let b = rng.gen_range(0..grid);
        let c = (a.min(b), a.max(b));
        if a == b || chords.contains(&c) || chords.iter().any(|&d| cross(c, d)) {
            continue;
        }
        if !shared
            && chords
                .iter()
                .any(|&(x, y)| x == c.0 || x == c.1 || y == c.0 || y == c.1)
        {
            continue;
        }
        chords.push(c);
    }
    chords
}

/// Arc lengths of the complementary regions of the chords, sorted.
///
/// Unit arc `[k, k+1)` lies inside chord `(a, b)` iff `a <= k < b`. Two unit
/// arcs bound the same region iff no chord separates them, so regions are the
/// classes of equal side vectors. Regions touching no arc are not seen; their
/// number is returned separately from the count `chords + 1` of all regions.
pub fn separation_oracle(grid: u64, chords: &[(u64, u64)]) -> (Vec<u64>, usize) {
    let mut classes: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for k in 0..grid {
        let side: Vec<bool> = chords.iter().map(|&(a, b)| a <= k && k < b).collect();
        *classes.entry(side).or_default() += 1;
    }
    let mut lengths: Vec<u64> = classes.into_values().collect();
    lengths.sort_unstable();
    let hidden = chords.len() + 1 - lengths.len();
    (lengths, hidden)
}

/// Digit sum of `n` in base 2.
pub fn binary_digit_sum(n: u64) -> u32 {
    n.count_ones()
}

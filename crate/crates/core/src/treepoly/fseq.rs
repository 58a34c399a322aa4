//! F-sequences: the first-return itinerary along the critical vein.

use std::collections::BTreeSet;

use crate::error::{Result, TautError};

use super::gamma::{gamma_seed, gamma_step, GammaState};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FSequence {
    values: Vec<u32>,
}

impl FSequence {
    /// Checks `F(0) = F(1) = 0`, `F(i) < i` and `F(i+1) <= F(i) + 1`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if let Some(problem) = basic_problem(&values) {
            return Err(TautError::InvalidParameter(problem));
        }
        Ok(FSequence { values })
    }

    pub(crate) fn from_values_unchecked(values: Vec<u32>) -> Self {
        FSequence { values }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// The tree depth `n` of `F(0..=n)`.
    pub fn depth(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    /// `l(0) = 1`, `l(i) = 2 l(F(i))`.
    pub fn ell(&self) -> Vec<u64> {
        let mut ell = vec![1u64; self.values.len()];
        for i in 1..self.values.len() {
            ell[i] = 2 * ell[self.values[i] as usize];
        }
        ell
    }
}

fn basic_problem(values: &[u32]) -> Option<String> {
    if values.first() != Some(&0) {
        return Some("F(0) must be 0".into());
    }
    if values.len() > 1 && values[1] != 0 {
        return Some("F(1) must be 0".into());
    }
    for i in 1..values.len() {
        if values[i] as usize >= i {
            return Some(format!("F({i}) = {} is not below {i}", values[i]));
        }
        if i + 1 < values.len() && values[i + 1] > values[i] + 1 {
            return Some(format!("F({}) jumps by more than one", i + 1));
        }
    }
    None
}

/// Replays `values` on the option digraph; `None` when some step is not an
/// option.
fn replay(values: &[u32], q: u32) -> Option<GammaState> {
    if values.len() < 2 || values[0] != 0 || values[1] != 0 {
        return None;
    }
    let mut state = gamma_seed(q).ok()?;
    for &t in &values[2..] {
        state = gamma_step(&state, t).ok()?;
    }
    Some(state)
}

/// True iff `values` is the F-sequence of some degree `q` tree: every step
/// `F(i+1)` must be an option of `F(i)`.
pub fn check_fsequence(values: &[u32], q: u32) -> bool {
    if values == [0] {
        return true;
    }
    replay(values, q).is_some()
}

/// The option rules stated as sets, which is exact in degree 3: the options
/// of 0 are `{0, 1}`; the options of `i` are `i + 1` together with the
/// options of `F(i)`, minus `F(i+1)` when `F(i) = 0` and minus `F(i) + 1`
/// when `F(i+1) = F(i) + 1`.
pub fn check_fsequence_sets(values: &[u32]) -> bool {
    if values.is_empty() || values[0] != 0 {
        return false;
    }
    if values.len() == 1 {
        return true;
    }
    if values[1] != 0 {
        return false;
    }
    let n = values.len() - 1;
    let mut options: Vec<BTreeSet<u32>> = vec![BTreeSet::from([0, 1])];
    for i in 1..n {
        let from = values[i];
        let next = values[i + 1];
        if !options[from as usize].contains(&next) {
            return false;
        }
        let mut mine = options[from as usize].clone();
        if from == 0 {
            mine.remove(&next);
        } else if next == from + 1 {
            mine.remove(&(from + 1));
        }
        mine.insert(i as u32 + 1);
        options.push(mine);
    }
    true
}

/// Quantities derived from an F-sequence `F(0..=n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedStats {
    pub ell: Vec<u64>,
    /// `first_index[k]`: least `i` with `l(i) = 2^k`; the defined values
    /// form a prefix.
    pub first_index: Vec<u32>,
    /// Indices `i < n` with `F(i+1) = F(i) + 1`.
    pub s_set: Vec<u32>,
    /// The other indices `i < n`.
    pub b_set: Vec<u32>,
    /// `prior_options[i]`: options of `i` other than `i + 1`, for `i < n`.
    pub prior_options: Vec<Vec<u32>>,
}

pub fn derived_stats(f: &FSequence, q: u32) -> Result<DerivedStats> {
    let values = f.values();
    let state = if values.len() == 1 {
        None
    } else {
        Some(replay(values, q).ok_or_else(|| {
            TautError::InvalidParameter(format!("{values:?} is not an F-sequence for q = {q}"))
        })?)
    };
    let ell = f.ell();
    let mut first_index = Vec::new();
    while let Some(i) = ell.iter().position(|&l| l == 1u64 << first_index.len()) {
        first_index.push(i as u32);
    }
    let n = values.len() - 1;
    let (mut s_set, mut b_set) = (Vec::new(), Vec::new());
    for i in 0..n {
        if values[i + 1] == values[i] + 1 {
            s_set.push(i as u32);
        } else {
            b_set.push(i as u32);
        }
    }
    let prior_options = (0..n as u32)
        .map(|i| {
            let edges = state
                .as_ref()
                .and_then(|s| s.edges(i))
                .expect("fixed vertex");
            edges
                .iter()
                .map(|&(t, _)| t)
                .filter(|&t| t != i + 1)
                .collect()
        })
        .collect();
    Ok(DerivedStats {
        ell,
        first_index,
        s_set,
        b_set,
        prior_options,
    })
}

/// Continues `steps` times with `F(m+1) = F(m) + 1`.
pub fn type_s_extend(f: &FSequence, steps: u32) -> FSequence {
    let mut values = f.values().to_vec();
    for _ in 0..steps {
        let last = *values.last().unwrap();
        values.push(last + 1);
    }
    FSequence { values }
}

/// Indices breaking `F(i) < i`, `F(i+1) <= F(i) + 1` or `l(i) = 2 l(F(i))`
/// against the lengths `ell` measured elsewhere.
pub fn properties_failures(f: &FSequence, ell: &[u64]) -> Vec<u32> {
    let v = f.values();
    (0..v.len())
        .filter(|&i| {
            let bad_bound = i > 0 && v[i] as usize >= i;
            let bad_step = i + 1 < v.len() && v[i + 1] > v[i] + 1;
            let bad_len = i > 0 && ell.get(i) != ell.get(v[i] as usize).map(|l| 2 * l).as_ref();
            (i == 0 && v[0] != 0) || bad_bound || bad_step || bad_len
        })
        .map(|i| i as u32)
        .collect()
}

/// Values of `k` breaking `F(i_k) = i_{k-1}` or
/// `i_{k+1} - i_k >= i_k - i_{k-1}`.
pub fn increments_failures(f: &FSequence, stats: &DerivedStats) -> Vec<u32> {
    let v = f.values();
    let idx = &stats.first_index;
    (1..idx.len())
        .filter(|&k| {
            let returns = v[idx[k] as usize] == idx[k - 1];
            let grows = k + 1 >= idx.len() || idx[k + 1] - idx[k] >= idx[k] - idx[k - 1];
            !(returns && grows)
        })
        .map(|k| k as u32)
        .collect()
}

/// Failures of the backslide statement for positive `i` in `B`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BackslideFailures {
    /// `F(i+1) < F(i)` fails.
    pub strict: Vec<u32>,
    /// `F(i+1) <= F(i)` fails.
    pub weak: Vec<u32>,
    /// `F(i+1)` is not a prior option of the first `F^k(i)` in `B`.
    pub membership: Vec<u32>,
}

impl BackslideFailures {
    pub fn is_empty(&self) -> bool {
        self.strict.is_empty() && self.weak.is_empty() && self.membership.is_empty()
    }
}

pub fn backslide_failures(f: &FSequence, stats: &DerivedStats) -> BackslideFailures {
    let v = f.values();
    let in_b = |i: u32| stats.b_set.binary_search(&i).is_ok();
    let mut out = BackslideFailures::default();
    for &i in stats.b_set.iter().filter(|&&i| i > 0) {
        let (now, next) = (v[i as usize], v[i as usize + 1]);
        if next >= now {
            out.strict.push(i);
        }
        if next > now {
            out.weak.push(i);
        }
        let mut b = now;
        while !in_b(b) {
            b = v[b as usize];
        }
        if !stats.prior_options[b as usize].contains(&next) {
            out.membership.push(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(v: &[u32]) -> FSequence {
        FSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(FSequence::new(vec![0, 1]).is_err());
        assert!(FSequence::new(vec![0, 0, 2]).is_err());
        assert!(FSequence::new(vec![1]).is_err());
        assert_eq!(fs(&[0, 0, 1, 0]).ell(), vec![1, 2, 4, 2]);
    }

    #[test]
    fn option_checks() {
        for q in 3..=5 {
            assert!(check_fsequence(&[0, 0, 1, 2, 3], q));
            assert!(!check_fsequence(&[0, 0, 2], q));
            assert!(check_fsequence(&[0, 0, 0, 0], q));
        }
        // after F(2) = 1 the root edge to 1 is used up at vertex 1
        assert!(!check_fsequence(&[0, 0, 1, 1], 3));
        assert!(check_fsequence(&[0, 0, 1, 0, 0], 3));
        assert!(check_fsequence(&[0, 0], 2));
        assert!(!check_fsequence(&[0, 0, 0], 2));
    }

    #[test]
    fn set_rules_match_the_digraph_in_degree_three() {
        // every sequence obeying the basic bounds, up to length 8
        fn grow(v: &mut Vec<u32>, len: usize) {
            if v.len() == len {
                assert_eq!(check_fsequence_sets(v), check_fsequence(v, 3), "{v:?}");
                return;
            }
            let last = *v.last().unwrap();
            for next in 0..=last + 1 {
                if (next as usize) < v.len() {
                    v.push(next);
                    grow(v, len);
                    v.pop();
                }
            }
        }
        for len in 2..=8 {
            grow(&mut vec![0, 0], len);
        }
    }

    #[test]
    fn maximal_type_stats() {
        let f = fs(&[0, 0, 1, 2, 3]);
        let s = derived_stats(&f, 3).unwrap();
        assert_eq!(s.ell, vec![1, 2, 4, 8, 16]);
        assert_eq!(s.first_index, vec![0, 1, 2, 3, 4]);
        assert_eq!(s.b_set, vec![0]);
        assert_eq!(s.s_set, vec![1, 2, 3]);
        assert!(increments_failures(&f, &s).is_empty());
        assert!(backslide_failures(&f, &s).is_empty());
    }

    #[test]
    fn return_to_root() {
        let f = fs(&[0, 0, 1, 0]);
        let s = derived_stats(&f, 3).unwrap();
        assert_eq!(s.ell[3], 2);
        assert_eq!(s.first_index, vec![0, 1, 2]);
        assert_eq!(s.prior_options[1], vec![0]);
    }

    #[test]
    fn strict_backslide_fails_when_f_stays_put() {
        // 1 and 3 are in B but F does not go down there
        let f = fs(&[0, 0, 0, 1, 1]);
        assert!(check_fsequence(f.values(), 3));
        let s = derived_stats(&f, 3).unwrap();
        let b = backslide_failures(&f, &s);
        assert_eq!(b.strict, vec![1, 3]);
        assert!(b.weak.is_empty() && b.membership.is_empty());
    }

    #[test]
    fn type_s() {
        let f = type_s_extend(&fs(&[0, 0]), 3);
        assert_eq!(f.values(), &[0, 0, 1, 2, 3]);
        let g = type_s_extend(&fs(&[0, 0, 1, 0, 0]), 6);
        assert!(check_fsequence(g.values(), 3));
        // F(m) = m - 4 from m = 4 on, so l(m) = 2 l(m - 4)
        let ell = g.ell();
        assert!((4..ell.len()).all(|m| ell[m] == 2 * ell[m - 4]));
    }
}

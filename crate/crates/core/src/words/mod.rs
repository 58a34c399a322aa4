//! Unbordered and 1-unbordered words.
//!
//! A border of a word is a nonempty proper suffix equal to the prefix of the
//! same length. Over the alphabet `Z/q`, a word is 1-unbordered when no
//! nonempty proper suffix equals the prefix `P` or `P'`, where `P'` adds one
//! (mod q) to the first digit of `P`.
//!
//! `a_n` and `b_n` count unbordered and 1-unbordered words of length `n`;
//! both satisfy short recursions and have closed-form generating functions
//! (see [`series`]). The 1-unbordered count also gives the short-component
//! column `N_q(n, 0) = b_{n+1} / q` of the lamination census.

pub mod series;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{check_q, Result, TautError};

pub use series::{
    alpha_series, beta_closed_form, digit_sum_series, h_value, lacunary_product, SeriesCoefficients,
};

/// Default cap on the number of words an exhaustive count may visit.
pub const DEFAULT_WORD_BUDGET: u128 = 100_000_000;

/// A finite word over the digits `0..q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitWord {
    q: u32,
    digits: Vec<u32>,
}

impl DigitWord {
    pub fn new(q: u32, digits: Vec<u32>) -> Result<Self> {
        check_q(q, 2)?;
        if let Some(&d) = digits.iter().find(|&&d| d >= q) {
            return Err(TautError::InvalidParameter(format!(
                "digit {d} out of range for q = {q}"
            )));
        }
        Ok(DigitWord { q, digits })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `W'`: the word with one added to its first digit, mod q.
    pub fn bumped(&self) -> DigitWord {
        let mut digits = self.digits.clone();
        if let Some(first) = digits.first_mut() {
            *first = (*first + 1) % self.q;
        }
        DigitWord { q: self.q, digits }
    }

    pub fn is_bordered(&self) -> bool {
        has_border(&self.digits)
    }

    /// Errors on the empty word; `b_0 = 1` is handled by the counters.
    pub fn is_one_unbordered(&self) -> Result<bool> {
        if self.digits.is_empty() {
            return Err(TautError::InvalidParameter(
                "1-unbordered predicate needs a nonempty word".into(),
            ));
        }
        Ok(!has_one_border(&self.digits, self.q))
    }
}

pub fn is_bordered(w: &DigitWord) -> bool {
    w.is_bordered()
}

pub fn is_one_unbordered(w: &DigitWord) -> Result<bool> {
    w.is_one_unbordered()
}

/// True iff some nonempty proper suffix equals the prefix of the same length.
pub fn has_border(digits: &[u32]) -> bool {
    let n = digits.len();
    (1..n).any(|k| digits[n - k..] == digits[..k])
}

/// True iff some nonempty proper suffix equals the prefix `P` or `P'`.
pub fn has_one_border(digits: &[u32], q: u32) -> bool {
    let n = digits.len();
    (1..n).any(|k| {
        let suffix = &digits[n - k..];
        let tail_matches = suffix[1..] == digits[1..k];
        tail_matches && (suffix[0] == digits[0] || suffix[0] == (digits[0] + 1) % q)
    })
}

/// A count sequence `values[n]` for `n = 0..`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSequence {
    pub q: u32,
    pub values: Vec<BigUint>,
}

impl CountSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }

    pub fn to_u64_vec(&self) -> Option<Vec<u64>> {
        use num_traits::ToPrimitive;
        self.values.iter().map(|v| v.to_u64()).collect()
    }
}

fn check_budget(q: u32, n: usize, budget: u128) -> Result<()> {
    let words = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if words > budget {
        return Err(TautError::BudgetExceeded {
            what: "word enumeration",
            requested: words,
            cap: budget,
        });
    }
    Ok(())
}

/// Counts the words of length `n` accepted by `keep`, partitioned by first
/// digit across the rayon pool.
fn count_words(q: u32, n: usize, keep: impl Fn(&[u32]) -> bool + Sync) -> u64 {
    if n == 0 {
        return 1;
    }
    (0..q)
        .into_par_iter()
        .map(|first| {
            let mut word = vec![0u32; n];
            word[0] = first;
            let mut count = 0u64;
            loop {
                if keep(&word) {
                    count += 1;
                }
                // odometer over positions 1..n
                let mut pos = n;
                loop {
                    pos -= 1;
                    if pos == 0 {
                        return count;
                    }
                    word[pos] += 1;
                    if word[pos] < q {
                        break;
                    }
                    word[pos] = 0;
                }
            }
        })
        .sum()
}

/// Exhaustive `a_n`; `a_0 = 1`.
pub fn count_unbordered_brute(q: u32, n: usize, budget: u128) -> Result<BigUint> {
    check_q(q, 2)?;
    check_budget(q, n, budget)?;
    Ok(BigUint::from(count_words(q, n, |w| !has_border(w))))
}

/// Exhaustive `b_n`; `b_0 = 1`.
pub fn count_one_unbordered_brute(q: u32, n: usize, budget: u128) -> Result<BigUint> {
    check_q(q, 2)?;
    check_budget(q, n, budget)?;
    Ok(BigUint::from(count_words(q, n, |w| !has_one_border(w, q))))
}

/// Exhaustive count of 1-unbordered words of length `n` whose first digit is `first`.
pub fn count_one_unbordered_with_first(
    q: u32,
    n: usize,
    first: u32,
    budget: u128,
) -> Result<BigUint> {
    check_q(q, 2)?;
    check_budget(q, n, budget)?;
    if n == 0 || first >= q {
        return Err(TautError::InvalidParameter(format!(
            "need n >= 1 and first digit < q (n = {n}, first = {first})"
        )));
    }
    Ok(BigUint::from(count_words(q, n, |w| {
        w[0] == first && !has_one_border(w, q)
    })))
}

/// `a_{2n+1} = q a_{2n}`, `a_{2n} = q a_{2n-1} - a_n`, `a_0 = 1`.
pub fn count_unbordered_recursive(q: u32, n_max: usize) -> Result<CountSequence> {
    check_q(q, 2)?;
    Ok(CountSequence {
        q,
        values: doubling_recursion(q, n_max, 1),
    })
}

/// `b_{2n+1} = q b_{2n}`, `b_{2n} = q b_{2n-1} - 2 b_n`, `b_0 = 1`.
pub fn count_one_unbordered_recursive(q: u32, n_max: usize) -> Result<CountSequence> {
    check_q(q, 2)?;
    Ok(CountSequence {
        q,
        values: doubling_recursion(q, n_max, 2),
    })
}

/// Shared shape of both recursions; `penalty` is the coefficient of the
/// half-index term subtracted at even indices.
fn doubling_recursion(q: u32, n_max: usize, penalty: u32) -> Vec<BigUint> {
    let q = BigUint::from(q);
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(BigUint::one());
    for n in 1..=n_max {
        let mut next = &q * &values[n - 1];
        if n % 2 == 0 {
            let sub = &values[n / 2] * penalty;
            // the counts are nonnegative, so this never underflows
            next -= sub;
        }
        values.push(next);
    }
    values
}

/// `N_q(n, 0)` for `n = 0..=n_max`, as `b_{n+1} / q`.
///
/// For `q = 2` the lamination is empty and the column is `1, 0, 0, ...`.
pub fn short_column(q: u32, n_max: usize) -> Result<CountSequence> {
    check_q(q, 2)?;
    if q == 2 {
        let mut values = vec![BigUint::zero(); n_max + 1];
        values[0] = BigUint::one();
        return Ok(CountSequence { q, values });
    }
    let b = count_one_unbordered_recursive(q, n_max + 1)?;
    let qb = BigUint::from(q);
    let mut values = Vec::with_capacity(n_max + 1);
    for (index, value) in b.values.iter().enumerate().skip(1) {
        if !(value % &qb).is_zero() {
            return Err(TautError::Divisibility {
                q,
                index,
                value: value.to_string(),
            });
        }
        values.push(value / &qb);
    }
    Ok(CountSequence { q, values })
}

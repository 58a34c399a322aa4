//! Leaf generation for the normalized tautological lamination.
//!
//! With `theta_j = (j-1)/q` approached from below, a depth `n` leaf of type
//! `j` comes from a word `x = (q-2) x_1 .. x_{n-1} (j-1)`. Its partner word
//! `y` is built right to left: `y_n = j`; `y_i = x_i` when `x_i < q-2`;
//! otherwise `y_i` is whichever of `q-2`, `q-1` keeps the leaf
//! `{.x_i..x_n, .y_i..y_n}` on the same side of `{x, z}`, where `z` is `x`
//! with first digit `q-1`. The emitted leaf is `{.x_1..x_n, .y_1..y_n}`.
//!
//! All side tests run on `(value, level)` pairs: the point `.x_i..x_n` is
//! `q^i x`, which sits `eps q^-(n-i)` below its value.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{check_q, pow_u64, Result, TautError};

/// A leaf as a pair of numerators on the `q^depth` grid. `x` ends in the
/// digit `type - 1`, `y` in the digit `type`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leaf {
    pub x: u32,
    pub y: u32,
}

impl Leaf {
    pub fn leaf_type(&self, q: u32) -> u32 {
        self.x % q + 1
    }

    pub fn is_short(&self) -> bool {
        self.y == self.x + 1
    }
}

/// Scratch space and constants for one `(q, n)`.
struct DigitRule {
    q: u64,
    n: usize,
    /// `pow[k] = q^k` for `k = 0..=n+1`
    pow: Vec<u64>,
}

impl DigitRule {
    fn new(q: u32, n: u32) -> Result<Self> {
        // x and z live on the q^(n+1) grid; leaf endpoints on q^n
        pow_u64(q, n + 1)?;
        if pow_u64(q, n)? > u32::MAX as u64 {
            return Err(TautError::TooLarge(format!("grid {q}^{n} exceeds 32 bits")));
        }
        let pow = (0..=n + 1).map(|k| (q as u64).pow(k)).collect();
        Ok(DigitRule {
            q: q as u64,
            n: n as usize,
            pow,
        })
    }

    /// `(value, level)` order; a lower level is a larger downward offset.
    fn cmp_points(a: (u64, usize), b: (u64, usize)) -> Ordering {
        a.0.cmp(&b.0).then(a.1.cmp(&b.1))
    }

    /// Computes the partner of `x` (digits `x[0..=n]`) and returns the leaf.
    /// `suffix` is scratch of length `n + 2`.
    fn leaf(&self, x: &[u32], suffix: &mut [u64]) -> Result<Leaf> {
        let (q, n) = (self.q, self.n);
        let top = q as u32 - 2;
        // suffix[i] = value of x_i .. x_n as an integer
        suffix[n + 1] = 0;
        for i in (0..=n).rev() {
            suffix[i] = x[i] as u64 * self.pow[n - i] + suffix[i + 1];
        }
        let x_pt = (suffix[0], n);
        let z_pt = (suffix[0] + self.pow[n], n);
        let in_arc = |p: (u64, usize)| {
            Self::cmp_points(x_pt, p) != Ordering::Greater
                && Self::cmp_points(p, z_pt) == Ordering::Less
        };

        let j = x[n] + 1;
        let mut y_suffix = j as u64;
        for i in (1..n).rev() {
            let xi = x[i];
            let yi = if xi < top {
                xi
            } else {
                let level = n - i;
                let a_side = in_arc((suffix[i] * self.pow[i], level));
                let mut chosen = None;
                let mut admissible = 0;
                for cand in [top, top + 1] {
                    let b = (cand as u64 * self.pow[n - i] + y_suffix) * self.pow[i];
                    if in_arc((b, level)) == a_side {
                        admissible += 1;
                        chosen = Some(cand);
                    }
                }
                match (admissible, chosen) {
                    (1, Some(c)) => c,
                    _ => {
                        return Err(TautError::DigitRule {
                            word: x.to_vec(),
                            position: i,
                            candidates: admissible,
                        })
                    }
                }
            };
            y_suffix += yi as u64 * self.pow[n - i];
        }
        Ok(Leaf {
            x: suffix[1] as u32,
            y: y_suffix as u32,
        })
    }
}

/// The `q^(n-1) (q-2)` leaves of depth `n`, ordered by `(type, x)`.
///
/// The word space is split by type and leading free digit across the rayon
/// pool; the output order does not depend on the split.
pub fn depth_leaves_raw(q: u32, n: u32) -> Result<Vec<Leaf>> {
    check_q(q, 2)?;
    if n == 0 {
        return Err(TautError::InvalidParameter("leaf depth starts at 1".into()));
    }
    if q == 2 {
        return Ok(Vec::new());
    }
    let rule = DigitRule::new(q, n)?;
    let free = n as usize - 1;
    // one task per (type, x_1) keeps tasks balanced without tiny chunks
    let heads: Vec<(u32, Option<u32>)> = (1..=q - 2)
        .flat_map(|j| {
            if free == 0 {
                vec![(j, None)]
            } else {
                (0..q).map(|d| (j, Some(d))).collect()
            }
        })
        .collect();
    let chunks: Vec<Result<Vec<Leaf>>> = heads
        .par_iter()
        .map(|&(j, head)| {
            let n = n as usize;
            let mut x = vec![0u32; n + 1];
            x[0] = q - 2;
            x[n] = j - 1;
            let mut suffix = vec![0u64; n + 2];
            let mut out = Vec::new();
            let Some(head) = head else {
                out.push(rule.leaf(&x, &mut suffix)?);
                return Ok(out);
            };
            x[1] = head;
            // odometer over x_2 .. x_{n-1}
            loop {
                out.push(rule.leaf(&x, &mut suffix)?);
                let mut pos = n;
                loop {
                    pos -= 1;
                    if pos <= 1 {
                        return Ok(out);
                    }
                    x[pos] += 1;
                    if x[pos] < q {
                        break;
                    }
                    x[pos] = 0;
                }
            }
        })
        .collect();
    let mut leaves = Vec::with_capacity((q as usize - 2) * (q as usize).pow(n - 1));
    for chunk in chunks {
        leaves.extend(chunk?);
    }
    Ok(leaves)
}

/// The x-word `(q-2) x_1 .. x_n` of a leaf, recovered from its numerator.
pub fn x_word(q: u32, n: u32, leaf: &Leaf) -> Vec<u32> {
    let mut digits = vec![0u32; n as usize + 1];
    digits[0] = q - 2;
    let mut v = leaf.x;
    for i in (1..=n as usize).rev() {
        digits[i] = v % q;
        v /= q;
    }
    digits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one() {
        assert_eq!(depth_leaves_raw(3, 1).unwrap(), vec![Leaf { x: 0, y: 1 }]);
        assert_eq!(
            depth_leaves_raw(4, 1).unwrap(),
            vec![Leaf { x: 0, y: 1 }, Leaf { x: 1, y: 2 }]
        );
        assert!(depth_leaves_raw(2, 3).unwrap().is_empty());
    }

    #[test]
    fn depth_two_q3_by_hand() {
        // x = 1 x_1 0: x_1 = 0 copies, x_1 = 1 and 2 pick the partner on
        // their side of {x, z}
        assert_eq!(
            depth_leaves_raw(3, 2).unwrap(),
            vec![
                Leaf { x: 0, y: 1 },
                Leaf { x: 3, y: 4 },
                Leaf { x: 6, y: 7 }
            ]
        );
    }

    #[test]
    fn leaf_counts() {
        for q in 3..=6u32 {
            for n in 1..=5u32 {
                let leaves = depth_leaves_raw(q, n).unwrap();
                assert_eq!(leaves.len(), ((q - 2) * q.pow(n - 1)) as usize);
                let grid = q.pow(n);
                assert!(leaves
                    .iter()
                    .all(|l| l.x < grid && l.y < grid && l.x != l.y));
            }
        }
    }

    #[test]
    fn types_and_words() {
        for leaf in depth_leaves_raw(5, 3).unwrap() {
            let word = x_word(5, 3, &leaf);
            assert_eq!(word[0], 3);
            assert_eq!(word[3] + 1, leaf.leaf_type(5));
            assert_eq!(leaf.y % 5, leaf.leaf_type(5));
        }
    }
}

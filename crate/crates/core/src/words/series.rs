//! Truncated formal power series with exact integer coefficients, and the
//! closed forms of the word-count generating functions
//! `alpha(t) = sum a_n t^n` and `beta(t) = sum b_n t^n`.
//!
//! Every infinite product over `j` of a factor in `t^(2^j)` is cut at the
//! first `j` with `2^j > n_max`: later factors are `1 + O(t^(n_max+1))`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{check_q, Result};

/// Coefficients `0..=truncation` of a formal power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCoefficients {
    pub q: u32,
    pub coeffs: Vec<BigInt>,
}

impl SeriesCoefficients {
    fn zero(q: u32, n_max: usize) -> Self {
        SeriesCoefficients {
            q,
            coeffs: vec![BigInt::zero(); n_max + 1],
        }
    }

    fn one(q: u32, n_max: usize) -> Self {
        let mut s = Self::zero(q, n_max);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Highest exponent kept.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, other: &SeriesCoefficients) -> SeriesCoefficients {
        let n_max = self.truncation().min(other.truncation());
        let mut out = Self::zero(self.q, n_max);
        for (i, a) in self.coeffs.iter().enumerate().take(n_max + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n_max + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    /// Multiplies by `t^shift`, dropping what falls past the truncation.
    fn shifted(&self, shift: usize) -> SeriesCoefficients {
        let n_max = self.truncation();
        let mut out = Self::zero(self.q, n_max);
        for i in shift..=n_max {
            out.coeffs[i] = self.coeffs[i - shift].clone();
        }
        out
    }

    fn scaled(mut self, factor: &BigInt) -> SeriesCoefficients {
        for c in &mut self.coeffs {
            *c *= factor;
        }
        self
    }

    fn add_assign(&mut self, other: &SeriesCoefficients) {
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
    }
}

/// `1 / (1 - q t^step) = sum_k q^k t^(k step)`.
fn geometric(q: u32, step: usize, n_max: usize) -> SeriesCoefficients {
    let mut s = SeriesCoefficients::zero(q, n_max);
    let mut power = BigInt::one();
    for i in (0..=n_max).step_by(step) {
        s.coeffs[i] = power.clone();
        power *= q;
    }
    s
}

/// Exponents `2^j <= n_max` (at least `j = 0`).
fn doubling_steps(n_max: usize) -> impl Iterator<Item = usize> {
    std::iter::successors(Some(1usize), |&s| s.checked_mul(2))
        .take_while(move |&s| s <= n_max.max(1))
}

/// `h(0) = 1`, `h(n) = (-q)^s(n) (1 - (-2)^k(n))` where `2^k(n)` is the
/// largest power of two dividing `n` and `s(n)` its binary digit sum.
pub fn h_value(q: u32, n: u64) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let k = n.trailing_zeros();
    let s = n.count_ones();
    let lead = BigInt::from(-(q as i64)).pow(s);
    lead * (BigInt::one() - BigInt::from(-2).pow(k))
}

/// `beta(t) = H(t) prod_j 1/(1 - q t^(2^j))`, coefficients `0..=n_max`.
pub fn beta_closed_form(q: u32, n_max: usize) -> Result<SeriesCoefficients> {
    check_q(q, 2)?;
    let mut h = SeriesCoefficients::zero(q, n_max);
    for (n, c) in h.coeffs.iter_mut().enumerate() {
        *c = h_value(q, n as u64);
    }
    Ok(doubling_steps(n_max).fold(h, |acc, step| acc.mul(&geometric(q, step, n_max))))
}

/// `alpha(t) = 1 + q sum_j (-1)^j t^(2^j) prod_{i<=j} 1/(1 - q t^(2^i))`.
pub fn alpha_series(q: u32, n_max: usize) -> Result<SeriesCoefficients> {
    check_q(q, 2)?;
    let mut total = SeriesCoefficients::one(q, n_max);
    let mut product = SeriesCoefficients::one(q, n_max);
    for (j, step) in doubling_steps(n_max).enumerate() {
        product = product.mul(&geometric(q, step, n_max));
        let sign = if j % 2 == 0 {
            BigInt::from(q)
        } else {
            -BigInt::from(q)
        };
        total.add_assign(&product.shifted(step).scaled(&sign));
    }
    Ok(total)
}

/// `sum_n (-q)^s(n) t^n` with `s` the binary digit sum.
pub fn digit_sum_series(q: u32, n_max: usize) -> SeriesCoefficients {
    let mut s = SeriesCoefficients::zero(q, n_max);
    for (n, c) in s.coeffs.iter_mut().enumerate() {
        *c = BigInt::from(-(q as i64)).pow((n as u64).count_ones());
    }
    s
}

/// `prod_k (1 - q t^(2^k))`, truncated.
pub fn lacunary_product(q: u32, n_max: usize) -> SeriesCoefficients {
    doubling_steps(n_max).fold(SeriesCoefficients::one(q, n_max), |acc, step| {
        let mut factor = SeriesCoefficients::one(q, n_max);
        if step <= n_max {
            factor.coeffs[step] = -BigInt::from(q);
        }
        acc.mul(&factor)
    })
}

/// Converts nonnegative coefficients for comparison with count sequences.
pub fn to_naturals(series: &SeriesCoefficients) -> Option<Vec<num_bigint::BigUint>> {
    series
        .coeffs
        .iter()
        .map(|c| {
            if c.is_negative() {
                None
            } else {
                c.to_biguint()
            }
        })
        .collect()
}

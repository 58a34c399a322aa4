//! The census table `N_q(n, m)` shared by every engine.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Result, TautError};

/// Exact counts `N_q(n, m)` for a single `(q, n)`, indexed by `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CensusTable {
    q: u32,
    n: u32,
    counts: Vec<BigUint>,
}

impl CensusTable {
    pub fn new(q: u32, n: u32) -> Self {
        CensusTable {
            q,
            n,
            counts: vec![BigUint::zero(); n as usize + 1],
        }
    }

    pub fn from_counts(q: u32, n: u32, counts: impl IntoIterator<Item = BigUint>) -> Self {
        let mut table = CensusTable::new(q, n);
        for (m, c) in counts.into_iter().enumerate() {
            table.add(m as u32, &c);
        }
        table
    }

    pub fn from_u64(q: u32, n: u32, counts: &[u64]) -> Self {
        CensusTable::from_counts(q, n, counts.iter().map(|&c| BigUint::from(c)))
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `N_q(n, m)`; zero for every `m` that never occurred.
    pub fn get(&self, m: u32) -> BigUint {
        self.counts.get(m as usize).cloned().unwrap_or_default()
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Largest index held; at least `n`.
    pub fn max_m(&self) -> u32 {
        self.counts.len() as u32 - 1
    }

    pub fn add(&mut self, m: u32, amount: &BigUint) {
        let m = m as usize;
        if m >= self.counts.len() {
            self.counts.resize(m + 1, BigUint::zero());
        }
        self.counts[m] += amount;
    }

    pub fn add_u64(&mut self, m: u32, amount: u64) {
        self.add(m, &BigUint::from(amount));
    }

    /// Sum of `N * 2^m`, i.e. the total length in units of `q^-n`.
    pub fn total_length(&self) -> BigUint {
        self.counts
            .iter()
            .enumerate()
            .map(|(m, c)| c << m)
            .fold(BigUint::zero(), |acc, x| acc + x)
    }

    pub fn total_count(&self) -> BigUint {
        self.counts.iter().fold(BigUint::zero(), |acc, c| acc + c)
    }

    /// Checks `sum N 2^m = q^n` and `sum N = 1 + (q-2)(q^n-1)/(q-1)`.
    pub fn check_identities(&self) -> Result<()> {
        let qn = BigUint::from(self.q).pow(self.n);
        let length = self.total_length();
        if length != qn {
            return Err(TautError::Invariant(format!(
                "q={} n={}: total length {} != q^n = {}",
                self.q, self.n, length, qn
            )));
        }
        let expected = expected_component_count(self.q, self.n);
        let count = self.total_count();
        if count != expected {
            return Err(TautError::Invariant(format!(
                "q={} n={}: component count {} != {}",
                self.q, self.n, count, expected
            )));
        }
        Ok(())
    }

    /// Checks `N(n, n) = 1` and `N(n, m) = 0` for `floor(n/2) < m < n`, and
    /// that nothing lives above `m = n`.
    pub fn check_gap(&self) -> Result<()> {
        let n = self.n;
        if !self.get(n).is_one() {
            return Err(TautError::Invariant(format!(
                "q={} n={}: N(n,n) = {} != 1",
                self.q,
                n,
                self.get(n)
            )));
        }
        for m in (n / 2 + 1)..n {
            if !self.get(m).is_zero() {
                return Err(TautError::Invariant(format!(
                    "q={} n={}: N(n,{}) = {} inside the gap",
                    self.q,
                    n,
                    m,
                    self.get(m)
                )));
            }
        }
        if let Some(m) = (n + 1..=self.max_m()).find(|&m| !self.get(m).is_zero()) {
            return Err(TautError::Invariant(format!(
                "q={} n={}: N(n,{}) nonzero above m = n",
                self.q, n, m
            )));
        }
        Ok(())
    }

    /// Counts for `m = 0..=n`, the row as printed in the tables.
    pub fn row(&self) -> Vec<BigUint> {
        (0..=self.n).map(|m| self.get(m)).collect()
    }

    /// `{"q":..,"n":..,"counts":{"0":..}}` with big counts as strings.
    pub fn to_json(&self) -> Value {
        let mut counts = Map::new();
        for m in 0..=self.max_m() {
            counts.insert(m.to_string(), json_count(&self.get(m)));
        }
        json!({ "q": self.q, "n": self.n, "counts": Value::Object(counts) })
    }

    /// CSV rows `q,n,m,count` without the header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for m in 0..=self.max_m() {
            out.push_str(&format!("{},{},{},{}\n", self.q, self.n, m, self.get(m)));
        }
        out
    }
}

impl fmt::Display for CensusTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row: Vec<String> = self.row().iter().map(|c| c.to_string()).collect();
        write!(f, "{}", row.join(" "))
    }
}

/// `1 + (q-2)(q^n-1)/(q-1)`: one more than the number of leaves of depth `<= n`.
pub fn expected_component_count(q: u32, n: u32) -> BigUint {
    if q < 2 {
        return BigUint::one();
    }
    let qn = BigUint::from(q).pow(n);
    BigUint::one() + BigUint::from(q - 2) * (qn - 1u32) / BigUint::from(q - 1)
}

/// Largest integer JSON consumers can represent exactly as a double.
const JSON_SAFE_MAX: u64 = (1u64 << 53) - 1;

/// Integers up to 2^53 - 1 stay numbers; anything larger becomes a string.
pub fn json_count(value: &BigUint) -> Value {
    match value.to_u64() {
        Some(v) if v <= JSON_SAFE_MAX => Value::from(v),
        _ => Value::String(value.to_string()),
    }
}

/// Plain-text table: rows `n`, columns `m`, right-aligned.
pub fn format_table(tables: &[CensusTable]) -> String {
    let width_m = tables.iter().map(|t| t.n).max().unwrap_or(0);
    let mut cells: Vec<Vec<String>> = Vec::with_capacity(tables.len() + 1);
    let mut header = vec!["n\\m".to_string()];
    header.extend((0..=width_m).map(|m| m.to_string()));
    cells.push(header);
    for t in tables {
        let mut line = vec![t.n.to_string()];
        line.extend(t.row().iter().map(|c| c.to_string()));
        cells.push(line);
    }
    let columns = width_m as usize + 2;
    let widths: Vec<usize> = (0..columns)
        .map(|c| {
            cells
                .iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.len())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for (i, line) in cells.iter().enumerate() {
        let mut text = format!("{:>w$} |", line[0], w = widths[0]);
        for (c, cell) in line.iter().enumerate().skip(1) {
            text.push_str(&format!(" {:>w$}", cell, w = widths[c]));
        }
        out.push_str(text.trim_end());
        out.push('\n');
        if i == 0 {
            let rule: usize = widths.iter().sum::<usize>() + columns + 1;
            out.push_str(&"-".repeat(rule));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_on_published_row() {
        // q=3, n=3: 7 6 0 1
        let t = CensusTable::from_u64(3, 3, &[7, 6, 0, 1]);
        t.check_identities().unwrap();
        t.check_gap().unwrap();
        assert_eq!(t.to_string(), "7 6 0 1");
    }

    #[test]
    fn gap_violation_detected() {
        let t = CensusTable::from_u64(3, 3, &[7, 4, 1, 1]);
        assert!(t.check_gap().is_err());
        let t = CensusTable::from_u64(3, 3, &[7, 6, 0, 0]);
        assert!(t.check_gap().is_err());
    }

    #[test]
    fn component_count_formula() {
        assert_eq!(expected_component_count(3, 0), BigUint::one());
        assert_eq!(expected_component_count(3, 3), BigUint::from(14u32));
        assert_eq!(expected_component_count(2, 7), BigUint::one());
    }

    #[test]
    fn json_switches_to_strings_past_2_pow_53() {
        assert_eq!(
            json_count(&BigUint::from(JSON_SAFE_MAX)),
            Value::from(JSON_SAFE_MAX)
        );
        let big = BigUint::from(1u64 << 53);
        assert_eq!(json_count(&big), Value::String("9007199254740992".into()));
    }

    #[test]
    fn table_layout() {
        let rows = vec![
            CensusTable::from_u64(3, 0, &[1]),
            CensusTable::from_u64(3, 1, &[1, 1]),
        ];
        let text = format_table(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n\\m | 0 1");
        assert_eq!(lines[2], "  0 | 1");
        assert_eq!(lines[3], "  1 | 1 1");
    }
}

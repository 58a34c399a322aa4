//! Published census tables for `q = 3, 4, 5`, shipped as text files.
//!
//! Each file lists row `n` as `n: N(n,0) N(n,1) ... N(n,n)`. The SHA-256 of
//! every file is pinned so an edited table fails to load.

use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use crate::error::{Result, TautError};
use crate::table::CensusTable;

struct Source {
    q: u32,
    text: &'static str,
    sha256: &'static str,
}

const SOURCES: [Source; 3] = [
    Source {
        q: 3,
        text: include_str!("../../data/q3.txt"),
        sha256: "0aa642e8e58ea6c6c734b3053853ef96039cb5d640fb8c18cdddb44048241572",
    },
    Source {
        q: 4,
        text: include_str!("../../data/q4.txt"),
        sha256: "b98238ec16f75f93da232c11a1a431361b91aca7ccc01a692998106caa61c020",
    },
    Source {
        q: 5,
        text: include_str!("../../data/q5.txt"),
        sha256: "eccd46066b97803d75d466f921545dcf74c822fcdbd8a96a087edc5931a7c933",
    },
];

/// An immutable published table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceTable {
    q: u32,
    rows: Vec<Vec<u64>>,
    checksum: String,
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn parse(q: u32, text: &str) -> Result<Vec<Vec<u64>>> {
    let bad =
        |line: &str| TautError::Invariant(format!("reference table q={q}: bad line '{line}'"));
    let mut rows = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (n, counts) = line.split_once(':').ok_or_else(|| bad(line))?;
        let n: usize = n.trim().parse().map_err(|_| bad(line))?;
        let counts = counts
            .split_whitespace()
            .map(|c| c.parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad(line))?;
        if n != rows.len() || counts.len() != n + 1 {
            return Err(bad(line));
        }
        rows.push(counts);
    }
    Ok(rows)
}

impl ReferenceTable {
    /// Degrees with a published table.
    pub fn available() -> Vec<u32> {
        SOURCES.iter().map(|s| s.q).collect()
    }

    /// The table for `q`, or `None` if unpublished. Fails if the shipped
    /// file no longer matches its pinned checksum.
    pub fn load(q: u32) -> Result<Option<ReferenceTable>> {
        let Some(source) = SOURCES.iter().find(|s| s.q == q) else {
            return Ok(None);
        };
        let checksum = sha256_hex(source.text);
        if checksum != source.sha256 {
            return Err(TautError::Invariant(format!(
                "reference table q={q} checksum {checksum} does not match {}",
                source.sha256
            )));
        }
        Ok(Some(ReferenceTable {
            q,
            rows: parse(q, source.text)?,
            checksum,
        }))
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    /// Largest `n` covered.
    pub fn n_max(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn covers(&self, n: u32) -> bool {
        (n as usize) < self.rows.len()
    }

    pub fn get(&self, n: u32, m: u32) -> Option<u64> {
        let row = self.rows.get(n as usize)?;
        Some(row.get(m as usize).copied().unwrap_or(0))
    }

    pub fn row(&self, n: u32) -> Option<CensusTable> {
        let row = self.rows.get(n as usize)?;
        Some(CensusTable::from_counts(
            self.q,
            n,
            row.iter().map(|&c| BigUint::from(c)),
        ))
    }

    pub fn tables(&self) -> Vec<CensusTable> {
        (0..=self.n_max()).filter_map(|n| self.row(n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksums_are_pinned() {
        for s in &SOURCES {
            assert_eq!(sha256_hex(s.text), s.sha256, "q={}", s.q);
        }
    }

    #[test]
    fn transcription_satisfies_the_identities() {
        for q in ReferenceTable::available() {
            let table = ReferenceTable::load(q).unwrap().unwrap();
            for t in table.tables() {
                t.check_identities().unwrap();
                t.check_gap().unwrap();
            }
        }
    }

    #[test]
    fn coverage() {
        assert_eq!(ReferenceTable::load(3).unwrap().unwrap().n_max(), 12);
        assert_eq!(ReferenceTable::load(4).unwrap().unwrap().n_max(), 11);
        assert_eq!(ReferenceTable::load(5).unwrap().unwrap().n_max(), 11);
        assert!(ReferenceTable::load(6).unwrap().is_none());
        let t = ReferenceTable::load(3).unwrap().unwrap();
        assert_eq!(t.get(3, 1), Some(6));
        assert_eq!(t.get(3, 9), Some(0));
        assert_eq!(t.get(13, 0), None);
    }

    #[test]
    fn malformed_rows_rejected() {
        assert!(parse(3, "0: 1\n2: 3 1 1\n").is_err());
        assert!(parse(3, "0: 1\n1: 1\n").is_err());
        assert!(parse(3, "0: x\n").is_err());
    }
}

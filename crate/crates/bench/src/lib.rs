//! Workloads shared by the engine benchmarks.

/// A census problem: degree and largest row.
#[derive(Clone, Copy, Debug)]
pub struct Workload {
    pub q: u32,
    pub n: u32,
}

impl Workload {
    pub fn label(&self) -> String {
        format!("q{}_n{}", self.q, self.n)
    }
}

/// Sizes where every engine finishes in well under a second.
pub const SMALL: [Workload; 3] = [
    Workload { q: 3, n: 8 },
    Workload { q: 4, n: 6 },
    Workload { q: 5, n: 5 },
];

/// Sizes that exercise the pinch scan and the weighted walk at scale.
pub const LARGE: [Workload; 2] = [Workload { q: 3, n: 11 }, Workload { q: 5, n: 8 }];

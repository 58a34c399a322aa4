use std::cmp::Ordering;
use std::fmt;

use crate::error::{check_q, pow_u64, Result, TautError};

/// Infinitesimal offset of a circle point.
///
/// `Below(k)` sits `eps * q^-k` below the exact value for a fixed
/// infinitesimal `eps`. Points of the normalized lamination are limits from
/// below, and preimages under `z -> qz` shrink the offset by a factor of `q`,
/// so two points with equal value are ordered by their offset level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tick {
    Below(u32),
    Exact,
}

impl Ord for Tick {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Tick::Exact, Tick::Exact) => Ordering::Equal,
            (Tick::Exact, Tick::Below(_)) => Ordering::Greater,
            (Tick::Below(_), Tick::Exact) => Ordering::Less,
            (Tick::Below(a), Tick::Below(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Tick {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The point `numerator / q^scale` of `R/Z`, possibly perturbed by a tick.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CirclePoint {
    q: u32,
    scale: u32,
    numerator: u64,
    tick: Tick,
}

impl CirclePoint {
    pub fn new(q: u32, scale: u32, numerator: u64, tick: Tick) -> Result<Self> {
        check_q(q, 2)?;
        let grid = pow_u64(q, scale)?;
        if numerator >= grid {
            return Err(TautError::InvalidParameter(format!(
                "numerator {numerator} not below {q}^{scale}"
            )));
        }
        Ok(CirclePoint {
            q,
            scale,
            numerator,
            tick,
        })
    }

    pub fn exact(q: u32, scale: u32, numerator: u64) -> Result<Self> {
        CirclePoint::new(q, scale, numerator, Tick::Exact)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn tick(&self) -> Tick {
        self.tick
    }

    /// Numerator on the finer `q^scale` grid, or `OffGrid`.
    pub fn numerator_at(&self, scale: u32) -> Result<u64> {
        if scale >= self.scale {
            let factor = pow_u64(self.q, scale - self.scale)?;
            Ok(self.numerator * factor)
        } else {
            let factor = pow_u64(self.q, self.scale - scale)?;
            if !self.numerator.is_multiple_of(factor) {
                return Err(TautError::OffGrid {
                    q: self.q,
                    numerator: self.numerator,
                    scale: self.scale,
                    target: scale,
                });
            }
            Ok(self.numerator / factor)
        }
    }

    /// Position as a fraction of a full turn, for drawing.
    pub fn turns(&self) -> f64 {
        self.numerator as f64 / (self.q as f64).powi(self.scale as i32)
    }

    fn value_cmp(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        let lift = |p: &CirclePoint| p.numerator as u128 * (p.q as u128).pow(scale - p.scale);
        lift(self).cmp(&lift(other))
    }
}

impl Ord for CirclePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q
            .cmp(&other.q)
            .then_with(|| self.value_cmp(other))
            .then_with(|| self.tick.cmp(&other.tick))
    }
}

impl PartialOrd for CirclePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.numerator, self.q, self.scale)?;
        if let Tick::Below(k) = self.tick {
            write!(f, "-e{k}")?;
        }
        Ok(())
    }
}

/// A leaf of the lamination: an unordered pair of distinct points, stored
/// with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Chord {
    a: CirclePoint,
    b: CirclePoint,
    pub depth: u32,
    pub leaf_type: u32,
}

impl Chord {
    pub fn new(p: CirclePoint, r: CirclePoint, depth: u32, leaf_type: u32) -> Result<Self> {
        match p.cmp(&r) {
            Ordering::Equal => Err(TautError::InvalidParameter(format!(
                "chord endpoints coincide at {p}"
            ))),
            Ordering::Less => Ok(Chord {
                a: p,
                b: r,
                depth,
                leaf_type,
            }),
            Ordering::Greater => Ok(Chord {
                a: r,
                b: p,
                depth,
                leaf_type,
            }),
        }
    }

    pub fn endpoints(&self) -> (CirclePoint, CirclePoint) {
        (self.a, self.b)
    }

    fn separates(&self, p: &CirclePoint) -> bool {
        self.a < *p && *p < self.b
    }
}

/// Linked iff the four endpoints are distinct and the endpoints of `c2`
/// fall on different sides of `c1`.
pub fn links(c1: &Chord, c2: &Chord) -> bool {
    let pts = [c1.a, c1.b, c2.a, c2.b];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return false;
            }
        }
    }
    c1.separates(&c2.a) != c1.separates(&c2.b)
}

/// The same test on exact integer endpoints of one grid.
pub fn links_on_grid(c1: (u64, u64), c2: (u64, u64)) -> bool {
    let (a1, b1) = (c1.0.min(c1.1), c1.0.max(c1.1));
    let (a2, b2) = (c2.0.min(c2.1), c2.0.max(c2.1));
    if a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2 {
        return false;
    }
    let inside = |p: u64| a1 < p && p < b1;
    inside(a2) != inside(b2)
}

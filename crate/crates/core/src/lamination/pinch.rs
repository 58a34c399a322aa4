//! Pinching the circle along a finite set of unlinked chords.
//!
//! Chord ends are bucketed by grid position. Within a position, ends whose
//! partner lies earlier (closing) come first, innermost first; then ends
//! whose partner lies later (opening), outermost first. This is the only
//! cyclic order at a shared endpoint compatible with the chords being
//! unlinked. A single left-to-right scan with a stack of open chords then
//! assigns every unit of arc to the component directly under the innermost
//! open chord.

use crate::error::{pow_u64, Result, TautError};

use super::point::Chord;

/// One component of the pinched circle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Component {
    /// Arcs `[start, end]` of the original circle, in grid units.
    pub arcs: Vec<(u64, u64)>,
    /// Chords this component touches, as `(lo, hi)` grid positions.
    pub chords: Vec<(u64, u64)>,
}

/// Result of pinching: component lengths in units of `q^-scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinchResult {
    pub q: u32,
    pub scale: u32,
    pub lengths: Vec<u64>,
    /// Filled when details were requested; parallel to `lengths`.
    pub components: Vec<Component>,
}

impl PinchResult {
    pub fn total_length(&self) -> u64 {
        self.lengths.iter().sum()
    }

    pub fn sorted_lengths(&self) -> Vec<u64> {
        let mut v = self.lengths.clone();
        v.sort_unstable();
        v
    }
}

/// Chord ends grouped by grid position (compressed rows).
pub(crate) struct EndIndex {
    grid: u64,
    offsets: Vec<u32>,
    partners: Vec<u32>,
}

impl EndIndex {
    /// `feed` is called twice with the same chord sequence: once to count,
    /// once to fill.
    pub(crate) fn build<F>(grid: u64, feed: F) -> Result<Self>
    where
        F: Fn(&mut dyn FnMut(u32, u32)),
    {
        if grid == 0 || grid > u32::MAX as u64 {
            return Err(TautError::TooLarge(format!("pinch grid {grid}")));
        }
        let size = grid as usize;
        let mut offsets = vec![0u32; size + 1];
        let mut bad: Option<(u32, u32)> = None;
        feed(&mut |a, b| {
            if a as u64 >= grid || b as u64 >= grid || a == b {
                bad.get_or_insert((a, b));
                return;
            }
            offsets[a as usize + 1] += 1;
            offsets[b as usize + 1] += 1;
        });
        if let Some((a, b)) = bad {
            return Err(TautError::InvalidParameter(format!(
                "chord ({a}, {b}) is degenerate or off the grid of size {grid}"
            )));
        }
        for i in 0..size {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut partners = vec![0u32; offsets[size] as usize];
        feed(&mut |a, b| {
            partners[cursor[a as usize] as usize] = b;
            cursor[a as usize] += 1;
            partners[cursor[b as usize] as usize] = a;
            cursor[b as usize] += 1;
        });
        drop(cursor);
        for p in 0..size {
            let slots = &mut partners[offsets[p] as usize..offsets[p + 1] as usize];
            if slots.len() > 1 {
                let pos = p as u32;
                slots.sort_unstable_by_key(|&r| (r > pos, std::cmp::Reverse(r)));
            }
        }
        Ok(EndIndex {
            grid,
            offsets,
            partners,
        })
    }

    /// Runs the scan, reporting each component's length in closing order,
    /// the outer component last.
    pub(crate) fn scan(&self, detail: bool, mut emit: impl FnMut(u64, Component)) -> Result<()> {
        struct Open {
            from: u64,
            length: u64,
            component: Component,
        }
        let mut outer = Open {
            from: 0,
            length: 0,
            component: Component::default(),
        };
        let mut stack: Vec<Open> = Vec::new();
        let mut cursor = 0u64;
        for p in 0..self.grid as usize {
            let (lo, hi) = (self.offsets[p] as usize, self.offsets[p + 1] as usize);
            if lo == hi {
                continue;
            }
            let pos = p as u64;
            if pos > cursor {
                let top = stack.last_mut().unwrap_or(&mut outer);
                top.length += pos - cursor;
                if detail {
                    top.component.arcs.push((cursor, pos));
                }
            }
            cursor = pos;
            for &r in &self.partners[lo..hi] {
                let r = r as u64;
                if r > pos {
                    stack.push(Open {
                        from: pos,
                        length: 0,
                        component: Component::default(),
                    });
                    continue;
                }
                let open = stack.pop().filter(|o| o.from == r).ok_or_else(|| {
                    TautError::Linked(format!("chord ({r}, {pos}) crosses another chord"))
                })?;
                let mut component = open.component;
                if detail {
                    component.chords.push((r, pos));
                    let parent = stack.last_mut().unwrap_or(&mut outer);
                    parent.component.chords.push((r, pos));
                }
                emit(open.length, component);
            }
        }
        if !stack.is_empty() {
            return Err(TautError::Invariant("unbalanced chord ends".into()));
        }
        if self.grid > cursor {
            outer.length += self.grid - cursor;
            if detail {
                outer.component.arcs.push((cursor, self.grid));
            }
        }
        emit(outer.length, outer.component);
        Ok(())
    }
}

/// Pinches integer chords on a grid of `grid` points.
pub fn pinch_grid(
    grid: u64,
    chords: &[(u64, u64)],
    detail: bool,
) -> Result<(Vec<u64>, Vec<Component>)> {
    if chords
        .iter()
        .any(|&(a, b)| a > u32::MAX as u64 || b > u32::MAX as u64)
    {
        return Err(TautError::TooLarge("chord endpoint".into()));
    }
    let index = EndIndex::build(grid, |sink| {
        for &(a, b) in chords {
            sink(a as u32, b as u32);
        }
    })?;
    let mut lengths = Vec::with_capacity(chords.len() + 1);
    let mut components = Vec::new();
    index.scan(detail, |len, comp| {
        lengths.push(len);
        if detail {
            components.push(comp);
        }
    })?;
    Ok((lengths, components))
}

/// Pinches typed chords whose endpoints lie on the `q^scale` grid.
///
/// Ticks only order points sharing a value; the quotient identifies chord
/// ends at the same grid point, so they are dropped here.
pub fn pinch(q: u32, scale: u32, chords: &[Chord]) -> Result<PinchResult> {
    let grid = pow_u64(q, scale)?;
    let mut raw = Vec::with_capacity(chords.len());
    for c in chords {
        let (a, b) = c.endpoints();
        if a.q() != q || b.q() != q {
            return Err(TautError::InvalidParameter(
                "chord built for another q".into(),
            ));
        }
        let (a, b) = (a.numerator_at(scale)?, b.numerator_at(scale)?);
        if a == b {
            return Err(TautError::InvalidParameter(format!(
                "chord endpoints coincide at {a} on the {q}^{scale} grid"
            )));
        }
        raw.push((a, b));
    }
    let (lengths, components) = pinch_grid(grid, &raw, true)?;
    Ok(PinchResult {
        q,
        scale,
        lengths,
        components,
    })
}

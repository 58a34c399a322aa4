//! Explicit tree polynomials.
//!
//! Vertices live in an arena ordered level by level: the root is vertex 0,
//! and each extension appends the new leaves in the order of their parents.
//! The planar order is the order of each `children` list.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{check_q, Result, TautError};
use crate::table::CensusTable;

use super::fseq::FSequence;

/// Default cap on the number of explicitly enumerated trees.
pub const DEFAULT_TREE_BUDGET: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub parent: Option<u32>,
    pub children: Vec<u32>,
    pub critical: bool,
    /// `f(v)`.
    pub image: u32,
    pub length: u64,
    pub depth: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePolynomial {
    vertices: Vec<Vertex>,
    depth: u32,
}

/// A failed axiom of the tree polynomial definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Broken parent/child links, depths, or out-of-range references.
    Structure(String),
    LeafDepth {
        vertex: u32,
        depth: u32,
    },
    RootNotCritical,
    CriticalChildCount {
        vertex: u32,
        count: usize,
    },
    OrdinaryWithCriticalChild {
        vertex: u32,
    },
    RootCriticalChildNotFirst,
    RootImage,
    RootChildImage {
        vertex: u32,
    },
    ImageNotChildOfParentImage {
        vertex: u32,
    },
    OrdinaryChildMap {
        vertex: u32,
    },
    CriticalChildMap {
        vertex: u32,
    },
    Length {
        vertex: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure(s) => write!(f, "malformed tree: {s}"),
            Violation::LeafDepth { vertex, depth } => {
                write!(f, "leaf {vertex} has depth {depth}, not the tree depth")
            }
            Violation::RootNotCritical => write!(f, "root is not critical"),
            Violation::CriticalChildCount { vertex, count } => {
                write!(f, "critical vertex {vertex} has {count} critical children")
            }
            Violation::OrdinaryWithCriticalChild { vertex } => {
                write!(f, "ordinary vertex {vertex} has a critical child")
            }
            Violation::RootCriticalChildNotFirst => {
                write!(f, "critical child of the root is not first")
            }
            Violation::RootImage => write!(f, "f(root) is not the root"),
            Violation::RootChildImage { vertex } => {
                write!(f, "root child {vertex} does not map to the root")
            }
            Violation::ImageNotChildOfParentImage { vertex } => {
                write!(f, "f({vertex}) is not a child of f(parent)")
            }
            Violation::OrdinaryChildMap { vertex } => {
                write!(
                    f,
                    "children of ordinary vertex {vertex} do not map bijectively in order"
                )
            }
            Violation::CriticalChildMap { vertex } => {
                write!(
                    f,
                    "children of critical vertex {vertex} do not map 2-1 in order"
                )
            }
            Violation::Length { vertex } => write!(f, "length rule fails at vertex {vertex}"),
        }
    }
}

/// Structural consequences checked on every vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaCheck {
    /// `q l(v)` is the sum of the children's lengths.
    LengthSum,
    /// `v` has `(q-2) l(v) + 1` children.
    ChildCount,
    /// `l(w) <= 2 l(v)`, with equality iff all siblings of `w` have length 1.
    LengthSubdoubles,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaFailure {
    pub check: LemmaCheck,
    pub vertex: u32,
}

impl TreePolynomial {
    /// Wraps vertices without checking; see [`TreePolynomial::validate`].
    pub fn from_vertices(vertices: Vec<Vertex>, depth: u32) -> Self {
        TreePolynomial { vertices, depth }
    }

    /// The unique depth 1 tree of degree `q`: a critical child of length 2
    /// first, then `q - 2` ordinary children of length 1.
    pub fn depth_one(q: u32) -> Result<Self> {
        check_q(q, 2)?;
        let mut vertices = vec![Vertex {
            parent: None,
            children: (1..q).collect(),
            critical: true,
            image: 0,
            length: 1,
            depth: 0,
        }];
        for i in 1..q {
            vertices.push(Vertex {
                parent: Some(0),
                children: Vec::new(),
                critical: i == 1,
                image: 0,
                length: if i == 1 { 2 } else { 1 },
                depth: 1,
            });
        }
        Ok(TreePolynomial { vertices, depth: 1 })
    }

    /// The degree 2 tree of the given depth: a chain of critical vertices.
    pub fn degree_two_chain(depth: u32) -> Result<Self> {
        let mut tree = TreePolynomial::depth_one(2)?;
        while tree.depth < depth {
            tree = tree.extend(0)?;
        }
        Ok(tree)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Number of children of the root, plus one.
    pub fn degree(&self) -> u32 {
        self.vertices[0].children.len() as u32 + 1
    }

    /// The critical vertices from the root down to the critical leaf.
    pub fn critical_vein(&self) -> Vec<u32> {
        let mut vein = vec![0u32];
        let mut v = 0u32;
        while let Some(&c) = self.vertices[v as usize]
            .children
            .iter()
            .find(|&&c| self.vertices[c as usize].critical)
        {
            vein.push(c);
            v = c;
        }
        vein
    }

    pub fn critical_leaf(&self) -> u32 {
        *self.critical_vein().last().expect("vein contains the root")
    }

    /// `l(f(c))` for the critical leaf `c`.
    pub fn postcritical_length(&self) -> u64 {
        let c = self.critical_leaf() as usize;
        self.vertices[self.vertices[c].image as usize].length
    }

    /// Number of extensions: the children of `f(c)`.
    pub fn extension_count(&self) -> usize {
        let c = self.critical_leaf() as usize;
        self.vertices[self.vertices[c].image as usize]
            .children
            .len()
    }

    /// The depth + 1 tree whose critical leaf is a copy of child `choice` of
    /// `f(c)`.
    pub fn extend(&self, choice: usize) -> Result<TreePolynomial> {
        let c = self.critical_leaf();
        let target = self.vertices[c as usize].image;
        let options = &self.vertices[target as usize].children;
        if choice >= options.len() {
            return Err(TautError::InvalidChoice {
                choice,
                available: options.len(),
            });
        }
        let chosen = options[choice];
        let mut vertices = self.vertices.clone();
        let depth = self.depth + 1;
        let leaves: Vec<u32> = (0..self.vertices.len() as u32)
            .filter(|&v| self.vertices[v as usize].depth == self.depth)
            .collect();
        for v in leaves {
            let image = self.vertices[v as usize].image;
            let push = |vertices: &mut Vec<Vertex>, u: u32, critical: bool| {
                let length = self.vertices[u as usize].length * if critical { 2 } else { 1 };
                let id = vertices.len() as u32;
                vertices.push(Vertex {
                    parent: Some(v),
                    children: Vec::new(),
                    critical,
                    image: u,
                    length,
                    depth,
                });
                vertices[v as usize].children.push(id);
            };
            for &u in &self.vertices[image as usize].children {
                if v != c {
                    push(&mut vertices, u, false);
                } else if u == chosen {
                    push(&mut vertices, u, true);
                } else {
                    push(&mut vertices, u, false);
                    push(&mut vertices, u, false);
                }
            }
        }
        Ok(TreePolynomial { vertices, depth })
    }

    /// Every failed axiom; empty for a valid tree.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Err(v) = self.check_structure() {
            out.push(v);
            return out;
        }
        let vs = &self.vertices;
        let root = &vs[0];
        if !root.critical {
            out.push(Violation::RootNotCritical);
        }
        if root.image != 0 {
            out.push(Violation::RootImage);
        }
        if let Some(&first) = root.children.first() {
            if !vs[first as usize].critical {
                out.push(Violation::RootCriticalChildNotFirst);
            }
        }
        for (i, v) in vs.iter().enumerate() {
            let id = i as u32;
            if v.children.is_empty() && v.depth != self.depth {
                out.push(Violation::LeafDepth {
                    vertex: id,
                    depth: v.depth,
                });
            }
            let critical_children = v
                .children
                .iter()
                .filter(|&&c| vs[c as usize].critical)
                .count();
            if v.critical && !v.children.is_empty() && critical_children != 1 {
                out.push(Violation::CriticalChildCount {
                    vertex: id,
                    count: critical_children,
                });
            }
            if !v.critical && critical_children > 0 {
                out.push(Violation::OrdinaryWithCriticalChild { vertex: id });
            }
            match v.parent {
                Some(0) if v.image != 0 => out.push(Violation::RootChildImage { vertex: id }),
                Some(p) if p != 0 => {
                    let parent_image = vs[p as usize].image as usize;
                    if !vs[parent_image].children.contains(&v.image) {
                        out.push(Violation::ImageNotChildOfParentImage { vertex: id });
                    }
                }
                _ => {}
            }
            if i > 0 && !v.children.is_empty() {
                let images: Vec<u32> = v.children.iter().map(|&c| vs[c as usize].image).collect();
                let targets = &vs[v.image as usize].children;
                if !v.critical && images != *targets {
                    out.push(Violation::OrdinaryChildMap { vertex: id });
                }
                if v.critical && !self.critical_map_ok(v, &images, targets) {
                    out.push(Violation::CriticalChildMap { vertex: id });
                }
            }
            let expected = match (i, v.critical) {
                (0, _) => 1,
                (_, false) => vs[v.image as usize].length,
                (_, true) => 2 * vs[v.image as usize].length,
            };
            if v.length != expected {
                out.push(Violation::Length { vertex: id });
            }
        }
        out
    }

    fn check_structure(&self) -> std::result::Result<(), Violation> {
        let vs = &self.vertices;
        let bad = |s: String| Err(Violation::Structure(s));
        if vs.is_empty() {
            return bad("no vertices".into());
        }
        if vs[0].parent.is_some() || vs[0].depth != 0 {
            return bad("vertex 0 is not a root".into());
        }
        let n = vs.len() as u32;
        for (i, v) in vs.iter().enumerate() {
            if v.image >= n {
                return bad(format!("f({i}) out of range"));
            }
            if i > 0 {
                let Some(p) = v.parent.filter(|&p| p < n) else {
                    return bad(format!("vertex {i} has no valid parent"));
                };
                let pv = &vs[p as usize];
                if !pv.children.contains(&(i as u32)) || v.depth != pv.depth + 1 {
                    return bad(format!("vertex {i} is not a child of {p}"));
                }
            }
            for &c in &v.children {
                if c >= n || vs[c as usize].parent != Some(i as u32) {
                    return bad(format!("child link {i} -> {c}"));
                }
            }
        }
        Ok(())
    }

    /// Onto, order non-decreasing, 2-1 except the critical child which is
    /// the only preimage of its image.
    fn critical_map_ok(&self, v: &Vertex, images: &[u32], targets: &[u32]) -> bool {
        let position = |u: u32| targets.iter().position(|&t| t == u);
        let Some(positions) = images
            .iter()
            .map(|&u| position(u))
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        if positions.windows(2).any(|w| w[0] > w[1]) {
            return false;
        }
        let mut hits = vec![0usize; targets.len()];
        for &p in &positions {
            hits[p] += 1;
        }
        v.children.iter().zip(&positions).all(|(&c, &p)| {
            let want = if self.vertices[c as usize].critical {
                1
            } else {
                2
            };
            hits[p] == want
        }) && hits.iter().all(|&h| h > 0)
    }

    /// Vertices failing the length-sum, child-count or subdoubling rules.
    pub fn lemma_failures(&self) -> Vec<LemmaFailure> {
        let q = self.degree() as u64;
        let vs = &self.vertices;
        let mut out = Vec::new();
        for (i, v) in vs.iter().enumerate() {
            if v.children.is_empty() {
                continue;
            }
            let vertex = i as u32;
            let lengths: Vec<u64> = v.children.iter().map(|&c| vs[c as usize].length).collect();
            if lengths.iter().sum::<u64>() != q * v.length {
                out.push(LemmaFailure {
                    check: LemmaCheck::LengthSum,
                    vertex,
                });
            }
            if lengths.len() as u64 != (q - 2) * v.length + 1 {
                out.push(LemmaFailure {
                    check: LemmaCheck::ChildCount,
                    vertex,
                });
            }
            let subdoubles = lengths.iter().enumerate().all(|(k, &l)| {
                let siblings_unit = lengths.iter().enumerate().all(|(j, &s)| j == k || s == 1);
                l <= 2 * v.length && ((l == 2 * v.length) == siblings_unit)
            });
            if !subdoubles {
                out.push(LemmaFailure {
                    check: LemmaCheck::LengthSubdoubles,
                    vertex,
                });
            }
        }
        out
    }

    /// `F(i)`: the vein index of the first critical vertex among the
    /// iterates `f(c_i), f^2(c_i), ...`.
    pub fn f_sequence(&self) -> FSequence {
        let vein = self.critical_vein();
        let mut index = vec![u32::MAX; self.vertices.len()];
        for (i, &c) in vein.iter().enumerate() {
            index[c as usize] = i as u32;
        }
        let values = vein
            .iter()
            .map(|&c| {
                let mut w = self.vertices[c as usize].image;
                while !self.vertices[w as usize].critical {
                    w = self.vertices[w as usize].image;
                }
                index[w as usize]
            })
            .collect();
        FSequence::from_values_unchecked(values)
    }
}

/// `F` of an explicit tree.
pub fn f_sequence_of(tree: &TreePolynomial) -> FSequence {
    tree.f_sequence()
}

/// Visits every tree of depth `1..=depth_cap` in depth-first order of the
/// extension tree, children in choice order.
pub fn walk_trees(
    q: u32,
    depth_cap: u32,
    budget: u128,
    visit: &mut dyn FnMut(&TreePolynomial),
) -> Result<u128> {
    fn go(
        tree: &TreePolynomial,
        cap: u32,
        budget: u128,
        seen: &mut u128,
        visit: &mut dyn FnMut(&TreePolynomial),
    ) -> Result<()> {
        *seen += 1;
        if *seen > budget {
            return Err(TautError::BudgetExceeded {
                what: "tree",
                requested: *seen,
                cap: budget,
            });
        }
        visit(tree);
        if tree.depth() < cap {
            for choice in 0..tree.extension_count() {
                go(&tree.extend(choice)?, cap, budget, seen, visit)?;
            }
        }
        Ok(())
    }
    let mut seen = 0;
    if depth_cap >= 1 {
        go(
            &TreePolynomial::depth_one(q)?,
            depth_cap,
            budget,
            &mut seen,
            visit,
        )?;
    }
    Ok(seen)
}

/// All trees of depth `1..=depth_cap`, in walk order.
pub fn enumerate_trees(q: u32, depth_cap: u32, budget: u128) -> Result<Vec<TreePolynomial>> {
    let mut out = Vec::new();
    walk_trees(q, depth_cap, budget, &mut |t| out.push(t.clone()))?;
    Ok(out)
}

/// `N_q(n, m)` for `n = 0..=n_max` by counting explicit trees of depth
/// `n + 1` by postcritical length.
pub fn census_explicit(q: u32, n_max: u32, budget: u128) -> Result<Vec<CensusTable>> {
    let mut tables: Vec<CensusTable> = (0..=n_max).map(|n| CensusTable::new(q, n)).collect();
    let mut failure = None;
    walk_trees(q, n_max + 1, budget, &mut |t| {
        let len = t.postcritical_length();
        if !len.is_power_of_two() {
            failure.get_or_insert(len);
            return;
        }
        tables[t.depth() as usize - 1].add(len.trailing_zeros(), &BigUint::one());
    })?;
    if let Some(len) = failure {
        return Err(TautError::Invariant(format!(
            "postcritical length {len} is not a power of two"
        )));
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_is_valid() {
        for q in 2..=6 {
            let t = TreePolynomial::depth_one(q).unwrap();
            assert!(t.validate().is_empty());
            assert_eq!(t.degree(), q);
            assert_eq!(t.postcritical_length(), 1);
            assert_eq!(t.f_sequence().values(), &[0, 0]);
            assert_eq!(t.extension_count(), q as usize - 1);
        }
    }

    #[test]
    fn two_critical_children_is_rejected() {
        let mut t = TreePolynomial::depth_one(3).unwrap();
        t.vertices[2].critical = true;
        t.vertices[2].length = 2;
        assert!(t.validate().contains(&Violation::CriticalChildCount {
            vertex: 0,
            count: 2
        }));
    }

    #[test]
    fn degree_two_chain() {
        for depth in 1..=7 {
            let t = TreePolynomial::degree_two_chain(depth).unwrap();
            assert!(t.validate().is_empty());
            assert_eq!(t.degree(), 2);
            let mut expect = vec![0, 0];
            expect.extend(1..depth);
            assert_eq!(t.f_sequence().values(), &expect[..]);
        }
        assert_eq!(enumerate_trees(2, 6, 100).unwrap().len(), 6);
    }

    #[test]
    fn extensions_of_depth_one() {
        let t = TreePolynomial::depth_one(3).unwrap();
        let lengths: Vec<u64> = (0..2)
            .map(|c| t.extend(c).unwrap().postcritical_length())
            .collect();
        assert_eq!(lengths, vec![2, 1]);
        assert_eq!(
            t.extend(2).unwrap_err(),
            TautError::InvalidChoice {
                choice: 2,
                available: 2
            }
        );
    }

    #[test]
    fn extensions_preserve_validity_and_sum_lengths() {
        for q in 3..=5u32 {
            walk_trees(q, 4, 10_000, &mut |t| {
                assert!(t.validate().is_empty(), "{:?}", t.validate());
                assert!(t.lemma_failures().is_empty());
                assert_eq!(t.degree(), q);
                let k = t.extension_count();
                assert_eq!(k as u64, (q as u64 - 2) * t.postcritical_length() + 1);
                let sum: u64 = (0..k)
                    .map(|c| t.extend(c).unwrap().postcritical_length())
                    .sum();
                assert_eq!(sum, q as u64 * t.postcritical_length());
            })
            .unwrap();
        }
    }

    #[test]
    fn tree_counts() {
        // depth <= 2 in total, then exactly depth 4
        assert_eq!(enumerate_trees(3, 2, 100).unwrap().len(), 3);
        let at_four = enumerate_trees(3, 4, 100)
            .unwrap()
            .iter()
            .filter(|t| t.depth() == 4)
            .count();
        assert_eq!(at_four, 14);
        assert!(enumerate_trees(3, 4, 10).is_err());
    }

    #[test]
    fn explicit_census() {
        let rows = census_explicit(3, 3, 1000).unwrap();
        assert_eq!(rows[3], CensusTable::from_u64(3, 3, &[7, 6, 0, 1]));
        let rows = census_explicit(5, 4, 10_000).unwrap();
        assert_eq!(rows[4], CensusTable::from_u64(5, 4, &[345, 114, 9, 0, 1]));
    }
}

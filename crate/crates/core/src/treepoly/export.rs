//! The tautological tree: tree polynomials as vertices, extensions as edges.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::error::Result;

use super::tree::walk_trees;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautNode {
    /// Postcritical length of the tree polynomial at this vertex.
    pub ell: u64,
    /// Depth of the tree polynomial; the root is the depth 1 tree.
    pub depth: u32,
    pub parent: Option<u32>,
    pub children: Vec<u32>,
}

/// Vertices in preorder, children in extension order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautologicalTree {
    pub q: u32,
    pub depth: u32,
    pub nodes: Vec<TautNode>,
}

/// Tree polynomials of degree `q` and depth `1..=depth`.
pub fn export_tautological_tree(q: u32, depth: u32, budget: u128) -> Result<TautologicalTree> {
    let mut nodes: Vec<TautNode> = Vec::new();
    // last node seen at each depth; the parent of a depth d tree is the
    // latest depth d - 1 tree in preorder
    let mut latest: Vec<u32> = Vec::new();
    walk_trees(q, depth, budget, &mut |t| {
        let d = t.depth();
        let id = nodes.len() as u32;
        let parent = (d > 1).then(|| latest[d as usize - 2]);
        if let Some(p) = parent {
            nodes[p as usize].children.push(id);
        }
        nodes.push(TautNode {
            ell: t.postcritical_length(),
            depth: d,
            parent,
            children: Vec::new(),
        });
        latest.truncate(d as usize - 1);
        latest.push(id);
    })?;
    Ok(TautologicalTree { q, depth, nodes })
}

impl TautologicalTree {
    /// Number of vertices at each depth `1..=depth`.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.depth as usize];
        for node in &self.nodes {
            sizes[node.depth as usize - 1] += 1;
        }
        sizes
    }

    /// Graphviz DOT, each vertex labeled by its length.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph tautological_tree_q{} {{", self.q);
        let _ = writeln!(out, "  node [shape=circle];");
        for (i, node) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", node.ell);
        }
        for (i, node) in self.nodes.iter().enumerate() {
            for c in &node.children {
                let _ = writeln!(out, "  n{i} -> n{c};");
            }
        }
        out.push_str("}\n");
        out
    }

    /// `{"q", "depth", "root": {"ell", "children": [...]}}`.
    pub fn to_json(&self) -> Value {
        fn node(tree: &TautologicalTree, i: u32) -> Value {
            let n = &tree.nodes[i as usize];
            let children: Vec<Value> = n.children.iter().map(|&c| node(tree, c)).collect();
            json!({ "ell": n.ell, "children": children })
        }
        let root = if self.nodes.is_empty() {
            Value::Null
        } else {
            node(self, 0)
        };
        json!({ "q": self.q, "depth": self.depth, "root": root })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_three_to_depth_four() {
        let t = export_tautological_tree(3, 4, 1000).unwrap();
        assert_eq!(t.level_sizes(), vec![1, 2, 5, 14]);
        assert_eq!(t.nodes[0].children.len(), 2);
        for node in &t.nodes {
            if node.depth < 4 {
                assert_eq!(node.children.len() as u64, node.ell + 1);
            }
            if node.ell == 1 && node.depth < 4 {
                let labels: Vec<u64> = node
                    .children
                    .iter()
                    .map(|&c| t.nodes[c as usize].ell)
                    .collect();
                assert_eq!(labels, vec![2, 1]);
            }
        }
        let dot = t.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches(" -> ").count(), t.nodes.len() - 1);
    }

    #[test]
    fn root_valence() {
        for q in 3..=6 {
            let t = export_tautological_tree(q, 2, 1000).unwrap();
            assert_eq!(t.nodes[0].children.len(), q as usize - 1);
        }
    }

    #[test]
    fn json_nests() {
        let t = export_tautological_tree(3, 2, 100).unwrap();
        let v = t.to_json();
        assert_eq!(v["root"]["ell"], 1);
        assert_eq!(v["root"]["children"][0]["ell"], 2);
        assert_eq!(v["root"]["children"][1]["ell"], 1);
    }
}

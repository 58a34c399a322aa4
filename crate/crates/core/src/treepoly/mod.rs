//! Tree polynomials and the option digraph.
//!
//! Trees of depth `n + 1` counted by postcritical length `2^m` give
//! `N_q(n, m)`. [`census_explicit`] builds every tree, which is only
//! feasible at small depth; [`census_trees`] walks F-sequences on the
//! option digraph, weighting each by the number of trees that share it.

mod export;
mod fseq;
mod gamma;
mod tree;

pub use export::{export_tautological_tree, TautNode, TautologicalTree};
pub use fseq::{
    backslide_failures, check_fsequence, check_fsequence_sets, derived_stats, increments_failures,
    properties_failures, type_s_extend, BackslideFailures, DerivedStats, FSequence,
};
pub use gamma::{
    census_trees, census_trees_rows, fsequence_weights, gamma_seed, gamma_step, walk_gamma, Edges,
    GammaState, Visit,
};
pub use tree::{
    census_explicit, enumerate_trees, f_sequence_of, walk_trees, LemmaCheck, LemmaFailure,
    TreePolynomial, Vertex, Violation, DEFAULT_TREE_BUDGET,
};

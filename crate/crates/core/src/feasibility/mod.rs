//! Ordinal chains over pairwise distances, relabeling by permutations, and
//! explicit point configurations that satisfy a chain without collapsing.

mod chain;
mod construct;
mod permutation;

pub use chain::{chain_satisfied, crowding_chain, is_nontrivial, OrdinalChain};
pub use construct::{
    apex_height_sequence, construct_disjoint_extremes, construct_nontrivial_nminus2, construct_partitioned,
    extremes_case, regular_simplex, ExtremesCase, Part,
};
pub use permutation::{
    chains_equivalent, equivalence_classes, is_equivalence_witness, relabel_edm, relabel_points, PermutationMap,
    EQUIVALENCE_MAX_N,
};

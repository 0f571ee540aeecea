//! Finite groups, exact character tables and Clifford theory.

pub mod catalog;
pub mod chartable;
pub mod clifford;
pub mod cyclotomic;
pub mod group;
pub mod spec;
pub mod tree;

pub use catalog::{catalog, named, CATALOG};
pub use chartable::{character_table, character_table_capped, character_table_with, CharacterTable};
pub use clifford::{
    extendibility_check, irr_over, max_normal_p_subgroup, normal_subgroups, relative_zeta, stabilizer_of_char,
    verify_clifford_sum, verify_index_bounds, CliffordCheck, Extendibility, IndexBoundsReport, NormalPair,
    SubgroupChars,
};
pub use spec::GroupSpec;
pub use tree::{decomposition_tree, zeta_via_tree, DecompositionTree, TreeNode};
pub use cyclotomic::{Cyc, CycField};
pub use group::{
    group_from_generators, group_from_permutations, Classes, FiniteGroup, GroupLaw, MatrixData, Subgroup,
    DEFAULT_GROUP_CAP,
};

use crate::dirichlet::DirichletPoly;
use crate::error::Result;

/// `zeta_G(s) = sum_{rho in Irr G} (dim rho)^{-s}`.
pub fn zeta_of_group(g: &FiniteGroup) -> Result<DirichletPoly> {
    Ok(character_table(g)?.zeta())
}

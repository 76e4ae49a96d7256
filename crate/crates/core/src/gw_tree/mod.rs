//! Critical Galton–Watson trees: offspring laws, exact size-conditioned
//! sampling, Lukasiewicz coding and descents.

mod genealogy;
mod law;
mod sampler;
mod tree;

pub use genealogy::{descent, for_each_descent, Genealogy, Junction};
pub use law::{stable_offspring, OffspringLaw, Variant, DEFAULT_CUTOFF};
pub use sampler::{sample_conditioned_tree, ConditionedSampler, SamplingMethod};
pub use tree::{
    all_plane_trees, cyclic_shift, decode_tree, encode_tree, tree_stats, LukasiewiczPath, PlaneTree, TreeStats,
};

//! Graph decomposition toolkit: buffered cop decompositions of
//! minor-free graphs, shortcut partitions derived from them, Steiner
//! point removal through approximate scattering partitions, `(1+eps)`
//! tree covers by star expansion, and a tree-cover distance oracle.
//!
//! Every construction is deterministic (ties broken by smallest id) and
//! ships with an exact verifier for each structural guarantee.

pub mod artifact;
pub mod copdecomp;
pub mod corpus;
pub mod graph;
pub mod oracle;
pub mod report;
pub mod scatter;
pub mod shortcut;
pub mod treecover;

pub use copdecomp::{
    build_decomposition, build_decomposition_with, BuildOptions, CopDecomposition,
    DecompositionError, ExpansionBags, Skeleton, Supernode, SupernodeId,
};
pub use graph::{
    connected_components, diameter, is_connected, load_edge_list, multi_source_sssp,
    save_edge_list, sssp, GraphError, PathWitness, SubgraphView, Topology, Vertex, WeightedGraph,
};
pub use oracle::{bench, Oracle, OracleError, RootedTree};
pub use report::Report;
pub use scatter::{
    scattered_path, scattering_from_shortcut, spr, ScatterError, ScatteringPartition,
};
pub use shortcut::{
    build_partition, cluster_graph, partition_for_epsilon, partition_with_diameter, path_cost,
    ClusterGraph, Clustering, ClusteringError, PathCost,
};
pub use treecover::{
    additive_cover_at_scale, build_tree_cover, verify_cover, CoverError, StarTree, TreeCover,
};

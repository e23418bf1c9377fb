//! Deterministic buffered cop decomposition.
//!
//! The construction partitions a connected weighted graph into
//! *supernodes*, each grown around a shortest-path tree *skeleton*, and
//! arranges them in a rooted *partition tree*. For a `K_r`-minor-free
//! input with radius parameter `delta`, the result satisfies, with
//! `gamma = delta / r` and width `r - 1`:
//!
//! - every supernode vertex is within `delta` of its skeleton, measured
//!   inside the supernode;
//! - every skeleton is an SSSP tree of the supernode's domain with at
//!   most `r - 2` leaves;
//! - any supernode cut off from an ancestor (no connecting edge) keeps
//!   its entire domain farther than `gamma` from that ancestor, measured
//!   inside the ancestor's domain;
//! - the bag expansion of the partition tree is a tree decomposition
//!   whose bags hold at most `r - 1` supernodes.
//!
//! Each property has an exact verifier in [`verify`]. All choices the
//! construction leaves open are resolved deterministically: smallest
//! vertex id for root and witness picks, FIFO order for cut-off
//! supernodes, lexicographic `(distance, boundary id)` for buffer
//! assignment, and smallest-contained-id order for component recursion.

mod build;
pub mod verify;

pub use build::{build_decomposition, build_decomposition_with, BuildOptions};

use crate::graph::Vertex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Supernode identifier: index into [`CopDecomposition::supernodes`],
/// assigned in creation order (the root is always 0).
pub type SupernodeId = u32;

#[derive(Debug, Error, PartialEq)]
pub enum DecompositionError {
    #[error("input graph must be connected")]
    Disconnected,
    #[error("width parameter r must be at least 3, got {0}")]
    WidthTooSmall(u32),
    #[error("radius parameter delta must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("unknown supernode id {0}")]
    UnknownSupernode(SupernodeId),
}

/// Rooted tree over a subset of a supernode's vertices; frozen at
/// supernode initialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skeleton {
    root: Vertex,
    /// Skeleton vertices, ascending.
    members: Vec<Vertex>,
    /// `(child, parent)` links, sorted by child; empty for a one-vertex
    /// skeleton.
    links: Vec<(Vertex, Vertex)>,
}

impl Skeleton {
    pub(crate) fn single(root: Vertex) -> Self {
        Self {
            root,
            members: vec![root],
            links: Vec::new(),
        }
    }

    /// Assembles a skeleton from explicit parts; pair with
    /// [`CopDecomposition::from_parts`] for hand-built decompositions.
    pub fn new(root: Vertex, mut members: Vec<Vertex>, mut links: Vec<(Vertex, Vertex)>) -> Self {
        members.sort_unstable();
        members.dedup();
        links.sort_unstable();
        Self {
            root,
            members,
            links,
        }
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn links(&self) -> &[(Vertex, Vertex)] {
        &self.links
    }

    pub fn parent_of(&self, v: Vertex) -> Option<Vertex> {
        self.links
            .binary_search_by_key(&v, |&(c, _)| c)
            .ok()
            .map(|i| self.links[i].1)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Number of non-root vertices without children; a one-vertex
    /// skeleton has zero leaves.
    pub fn leaf_count(&self) -> usize {
        self.members
            .iter()
            .filter(|&&v| v != self.root && !self.links.iter().any(|&(_, p)| p == v))
            .count()
    }
}

/// A connected induced subgraph with a skeleton, grown by the
/// construction and frozen afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Supernode {
    pub id: SupernodeId,
    /// Final vertex set, ascending.
    pub vertices: Vec<Vertex>,
    pub skeleton: Skeleton,
    /// Vertex set of the subgraph this supernode was initialized in; its
    /// domain is always a subset of this.
    pub init_domain: Vec<Vertex>,
    pub parent: Option<SupernodeId>,
    /// Depth in the partition tree (root = 0).
    pub depth: u32,
}

impl Supernode {
    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Result of the construction: the partition tree plus the total
/// vertex-to-supernode assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopDecomposition {
    pub r: u32,
    pub delta: f64,
    pub supernodes: Vec<Supernode>,
    /// `assignment[v]` is the supernode owning vertex `v`; slots for
    /// vertices outside a view host hold `SupernodeId::MAX`.
    pub assignment: Vec<SupernodeId>,
    /// Supernode pairs joined by at least one graph edge, per supernode,
    /// ascending.
    supernode_adjacency: Vec<Vec<SupernodeId>>,
}

impl CopDecomposition {
    /// Assembles a decomposition from explicit parts, recomputing the
    /// supernode adjacency from the host graph. The caller is trusted on
    /// everything else; run [`verify::verify_all`] on anything not built
    /// by [`build_decomposition`].
    pub fn from_parts<T: crate::graph::Topology>(
        g: &T,
        r: u32,
        delta: f64,
        supernodes: Vec<Supernode>,
        assignment: Vec<SupernodeId>,
    ) -> Self {
        let mut adjacency: Vec<Vec<SupernodeId>> = vec![Vec::new(); supernodes.len()];
        for v in g.vertices() {
            for (u, _) in g.neighbors(v) {
                if u <= v {
                    continue;
                }
                let (a, b) = (assignment[v as usize], assignment[u as usize]);
                if a != b {
                    adjacency[a as usize].push(b);
                    adjacency[b as usize].push(a);
                }
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Self {
            r,
            delta,
            supernodes,
            assignment,
            supernode_adjacency: adjacency,
        }
    }

    pub fn supernode_count(&self) -> usize {
        self.supernodes.len()
    }

    pub fn supernode(&self, id: SupernodeId) -> Result<&Supernode, DecompositionError> {
        self.supernodes
            .get(id as usize)
            .ok_or(DecompositionError::UnknownSupernode(id))
    }

    pub fn owner(&self, v: Vertex) -> SupernodeId {
        self.assignment[v as usize]
    }

    pub fn buffer_width(&self) -> f64 {
        self.delta / self.r as f64
    }

    /// Children of `id` in the partition tree, ascending.
    pub fn children(&self, id: SupernodeId) -> Vec<SupernodeId> {
        self.supernodes
            .iter()
            .filter(|s| s.parent == Some(id))
            .map(|s| s.id)
            .collect()
    }

    /// Strict ancestors of `id`, nearest first.
    pub fn ancestors(&self, id: SupernodeId) -> Vec<SupernodeId> {
        let mut out = Vec::new();
        let mut cur = self.supernodes[id as usize].parent;
        while let Some(p) = cur {
            out.push(p);
            cur = self.supernodes[p as usize].parent;
        }
        out
    }

    pub fn is_strict_ancestor(&self, anc: SupernodeId, of: SupernodeId) -> bool {
        let mut cur = self.supernodes[of as usize].parent;
        while let Some(p) = cur {
            if p == anc {
                return true;
            }
            cur = self.supernodes[p as usize].parent;
        }
        false
    }

    /// Supernode ids in the subtree rooted at `id`, ascending.
    pub fn subtree(&self, id: SupernodeId) -> Vec<SupernodeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(s) = stack.pop() {
            out.push(s);
            stack.extend(self.children(s));
        }
        out.sort_unstable();
        out
    }

    /// Domain of `id`: union of vertex sets over its subtree, ascending.
    pub fn dom_vertices(&self, id: SupernodeId) -> Result<Vec<Vertex>, DecompositionError> {
        self.supernode(id)?;
        let mut out = Vec::new();
        for s in self.subtree(id) {
            out.extend_from_slice(&self.supernodes[s as usize].vertices);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Induced subgraph view of the domain of `id`.
    pub fn dom<'a>(
        &self,
        g: &'a crate::graph::WeightedGraph,
        id: SupernodeId,
    ) -> Result<crate::graph::SubgraphView<'a>, DecompositionError> {
        Ok(g.view(&self.dom_vertices(id)?))
    }

    /// Supernodes adjacent to `id` through at least one graph edge.
    pub fn adjacent_supernodes(&self, id: SupernodeId) -> &[SupernodeId] {
        &self.supernode_adjacency[id as usize]
    }

    pub fn are_adjacent(&self, a: SupernodeId, b: SupernodeId) -> bool {
        self.supernode_adjacency[a as usize]
            .binary_search(&b)
            .is_ok()
    }

    /// Bag expansion: one bag per supernode, mirroring the partition
    /// tree's shape.
    pub fn expansion_bags(&self) -> ExpansionBags {
        let bags = self
            .supernodes
            .iter()
            .map(|s| {
                let mut bag = vec![s.id];
                let mut anc: Vec<SupernodeId> = self
                    .ancestors(s.id)
                    .into_iter()
                    .filter(|&a| self.are_adjacent(a, s.id))
                    .collect();
                anc.sort_unstable_by_key(|&a| self.supernodes[a as usize].depth);
                bag.extend(anc);
                bag
            })
            .collect();
        ExpansionBags { bags }
    }
}

/// Bags of the expanded partition tree: `bags[i]` holds supernode `i`
/// first, then its graph-adjacent strict ancestors by increasing depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionBags {
    bags: Vec<Vec<SupernodeId>>,
}

impl ExpansionBags {
    pub fn bag(&self, id: SupernodeId) -> &[SupernodeId] {
        &self.bags[id as usize]
    }

    pub fn bags(&self) -> &[Vec<SupernodeId>] {
        &self.bags
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests;

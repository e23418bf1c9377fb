//! Tree-cover distance oracle: answer a query as the minimum tree
//! distance over all cover trees containing both endpoints, each tree
//! distance resolved through a constant-time LCA structure (Euler tour
//! plus sparse-table range minimum).
//!
//! Cover trees are stars, where the LCA of two distinct members is
//! always the root; the oracle nevertheless handles arbitrary rooted
//! dominating trees so hand-built trees can be queried the same way.

use crate::graph::Vertex;
use crate::treecover::{StarTree, TreeCover};
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("vertex {0} is outside the oracle's vertex space")]
    UnknownVertex(Vertex),
    #[error("pair ({0}, {1}) is not covered by any tree")]
    Uncovered(Vertex, Vertex),
}

/// Explicit rooted tree over host vertices with weighted parent links.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootedTree {
    /// Node index to host vertex id; no duplicates.
    pub vertices: Vec<Vertex>,
    /// Node index of the root.
    pub root: usize,
    /// Parent node index per node (`None` exactly for the root).
    pub parent: Vec<Option<usize>>,
    /// Weight of the edge to the parent (0 for the root).
    pub parent_weight: Vec<f64>,
}

impl RootedTree {
    pub fn from_star(star: &StarTree) -> Self {
        let root = star
            .members
            .binary_search(&star.root)
            .expect("root is a member");
        let parent = (0..star.members.len())
            .map(|i| (i != root).then_some(root))
            .collect();
        let mut parent_weight = star.weights.clone();
        parent_weight[root] = 0.0;
        Self {
            vertices: star.members.clone(),
            root,
            parent,
            parent_weight,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Distance by walking parent links; the slow reference the LCA path
    /// is checked against.
    pub fn walk_distance(&self, a: usize, b: usize) -> f64 {
        let depth = |mut x: usize| {
            let mut d = 0usize;
            while let Some(p) = self.parent[x] {
                x = p;
                d += 1;
            }
            d
        };
        let (mut x, mut y) = (a, b);
        let (mut dx, mut dy) = (depth(a), depth(b));
        let mut total = 0.0;
        while dx > dy {
            total += self.parent_weight[x];
            x = self.parent[x].unwrap();
            dx -= 1;
        }
        while dy > dx {
            total += self.parent_weight[y];
            y = self.parent[y].unwrap();
            dy -= 1;
        }
        while x != y {
            total += self.parent_weight[x] + self.parent_weight[y];
            x = self.parent[x].unwrap();
            y = self.parent[y].unwrap();
        }
        total
    }
}

/// Euler tour + sparse table: `O(1)` LCA after `O(len log len)` setup.
#[derive(Debug, Clone)]
struct LcaIndex {
    euler: Vec<u32>,
    first: Vec<u32>,
    hop_depth: Vec<u32>,
    /// `sparse[k][i]`: position of the minimum-depth node among euler
    /// positions `[i, i + 2^k)`.
    sparse: Vec<Vec<u32>>,
}

impl LcaIndex {
    fn new(tree: &RootedTree) -> Self {
        let n = tree.len();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, p) in tree.parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        let mut hop_depth = vec![0u32; n];
        let mut euler = Vec::with_capacity(2 * n);
        let mut first = vec![u32::MAX; n];
        // iterative Euler tour
        enum Step {
            Enter(usize, u32),
            Revisit(usize),
        }
        let mut stack = vec![Step::Enter(tree.root, 0)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Enter(v, d) => {
                    hop_depth[v] = d;
                    first[v] = euler.len() as u32;
                    euler.push(v as u32);
                    for &c in children[v].iter().rev() {
                        stack.push(Step::Revisit(v));
                        stack.push(Step::Enter(c, d + 1));
                    }
                }
                Step::Revisit(v) => euler.push(v as u32),
            }
        }
        let m = euler.len();
        let levels = (usize::BITS - m.leading_zeros()) as usize;
        let mut sparse: Vec<Vec<u32>> = Vec::with_capacity(levels);
        sparse.push((0..m as u32).collect());
        let mut k = 1;
        while (1 << k) <= m {
            let half = 1 << (k - 1);
            let prev = &sparse[k - 1];
            let mut row = Vec::with_capacity(m - (1 << k) + 1);
            for i in 0..=(m - (1 << k)) {
                let a = prev[i];
                let b = prev[i + half];
                row.push(
                    if hop_depth[euler[a as usize] as usize]
                        <= hop_depth[euler[b as usize] as usize]
                    {
                        a
                    } else {
                        b
                    },
                );
            }
            sparse.push(row);
            k += 1;
        }
        Self {
            euler,
            first,
            hop_depth,
            sparse,
        }
    }

    fn lca(&self, a: usize, b: usize) -> usize {
        let (mut lo, mut hi) = (self.first[a], self.first[b]);
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        let len = (hi - lo + 1) as usize;
        let k = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let a = self.sparse[k][lo as usize];
        let b = self.sparse[k][hi as usize + 1 - (1 << k)];
        let (na, nb) = (
            self.euler[a as usize] as usize,
            self.euler[b as usize] as usize,
        );
        if self.hop_depth[na] <= self.hop_depth[nb] {
            na
        } else {
            nb
        }
    }

    fn words(&self) -> usize {
        self.euler.len()
            + self.first.len()
            + self.hop_depth.len()
            + self.sparse.iter().map(Vec::len).sum::<usize>()
    }
}

#[derive(Debug, Clone)]
struct IndexedTree {
    tree: RootedTree,
    lca: LcaIndex,
    /// Weighted depth per node.
    depth: Vec<f64>,
    /// `(vertex, node)` pairs sorted by vertex for membership lookup.
    lookup: Vec<(Vertex, u32)>,
}

impl IndexedTree {
    fn new(tree: RootedTree) -> Self {
        let n = tree.len();
        let lca = LcaIndex::new(&tree);
        // depths in hop order so parents resolve before children
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| lca.hop_depth[i]);
        let mut depth = vec![0.0f64; n];
        for i in order {
            if let Some(p) = tree.parent[i] {
                depth[i] = depth[p] + tree.parent_weight[i];
            }
        }
        let mut lookup: Vec<(Vertex, u32)> = tree
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        lookup.sort_unstable();
        Self {
            tree,
            lca,
            depth,
            lookup,
        }
    }

    fn node_of(&self, v: Vertex) -> Option<u32> {
        self.lookup
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| self.lookup[i].1)
    }

    fn dist(&self, a: u32, b: u32) -> f64 {
        let l = self.lca.lca(a as usize, b as usize);
        self.depth[a as usize] + self.depth[b as usize] - 2.0 * self.depth[l]
    }
}

/// Query structure: indexed trees plus a per-vertex membership index.
#[derive(Debug, Clone)]
pub struct Oracle {
    n: usize,
    epsilon: f64,
    trees: Vec<IndexedTree>,
    membership: Vec<Vec<u32>>,
}

/// Size accounting in 64-bit words (a proxy for the linear-space claim;
/// counts every stored array of the query structure).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeStats {
    pub tree_count: usize,
    pub total_words: usize,
    pub membership_words: usize,
}

impl Oracle {
    /// Builds from a cover; every vertex pair must share a tree, else
    /// the build fails naming the first uncovered pair.
    ///
    /// ```
    /// use copse_core::{build_tree_cover, graph, Oracle};
    ///
    /// let g = graph::path(9);
    /// let cover = build_tree_cover(&g, 0.5, 3).unwrap();
    /// let oracle = Oracle::from_cover(&cover).unwrap();
    /// let d = oracle.query(0, 8).unwrap();
    /// assert!((8.0..=12.0).contains(&d)); // within (1 + eps) of exact
    /// ```
    pub fn from_cover(cover: &TreeCover) -> Result<Self, OracleError> {
        let trees = cover.trees.iter().map(RootedTree::from_star).collect();
        Self::from_trees(trees, cover.n, cover.epsilon)
    }

    /// Builds from arbitrary rooted trees (dominance is the caller's
    /// contract; coverage is checked here).
    pub fn from_trees(trees: Vec<RootedTree>, n: usize, epsilon: f64) -> Result<Self, OracleError> {
        let trees: Vec<IndexedTree> = trees.into_iter().map(IndexedTree::new).collect();
        let mut membership: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, t) in trees.iter().enumerate() {
            for &v in &t.tree.vertices {
                membership[v as usize].push(i as u32);
            }
        }
        // coverage: every pair shares a tree (bitset intersection)
        let w = trees.len().div_ceil(64);
        let mut bits = vec![0u64; n * w];
        for (v, ts) in membership.iter().enumerate() {
            for &t in ts {
                bits[v * w + (t as usize) / 64] |= 1u64 << (t % 64);
            }
        }
        for u in 0..n {
            for v in (u + 1)..n {
                let covered = (0..w).any(|k| bits[u * w + k] & bits[v * w + k] != 0);
                if !covered {
                    return Err(OracleError::Uncovered(u as Vertex, v as Vertex));
                }
            }
        }
        Ok(Self {
            n,
            epsilon,
            trees,
            membership,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    /// Minimum tree distance over all trees containing both endpoints.
    pub fn query(&self, u: Vertex, v: Vertex) -> Result<f64, OracleError> {
        if u as usize >= self.n {
            return Err(OracleError::UnknownVertex(u));
        }
        if v as usize >= self.n {
            return Err(OracleError::UnknownVertex(v));
        }
        if u == v {
            return Ok(0.0);
        }
        let mut best = f64::INFINITY;
        let (mu, mv) = (&self.membership[u as usize], &self.membership[v as usize]);
        let (mut i, mut j) = (0, 0);
        while i < mu.len() && j < mv.len() {
            match mu[i].cmp(&mv[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let t = &self.trees[mu[i] as usize];
                    let a = t.node_of(u).expect("membership index is consistent");
                    let b = t.node_of(v).expect("membership index is consistent");
                    best = best.min(t.dist(a, b));
                    i += 1;
                    j += 1;
                }
            }
        }
        if best.is_infinite() {
            return Err(OracleError::Uncovered(u, v));
        }
        Ok(best)
    }

    /// Trees probed by a `(u, v)` query (the membership intersection).
    pub fn trees_probed(&self, u: Vertex, v: Vertex) -> usize {
        let (mu, mv) = (&self.membership[u as usize], &self.membership[v as usize]);
        let (mut i, mut j, mut k) = (0, 0, 0);
        while i < mu.len() && j < mv.len() {
            match mu[i].cmp(&mv[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    k += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        k
    }

    /// Slow per-tree reference: same minimum computed by walking parent
    /// links instead of LCA jumps.
    pub fn query_by_walking(&self, u: Vertex, v: Vertex) -> Result<f64, OracleError> {
        if u as usize >= self.n {
            return Err(OracleError::UnknownVertex(u));
        }
        if v as usize >= self.n {
            return Err(OracleError::UnknownVertex(v));
        }
        if u == v {
            return Ok(0.0);
        }
        let mut best = f64::INFINITY;
        for t in &self.trees {
            if let (Some(a), Some(b)) = (t.node_of(u), t.node_of(v)) {
                best = best.min(t.tree.walk_distance(a as usize, b as usize));
            }
        }
        if best.is_infinite() {
            return Err(OracleError::Uncovered(u, v));
        }
        Ok(best)
    }

    pub fn size_stats(&self) -> SizeStats {
        let membership_words: usize = self.membership.iter().map(Vec::len).sum();
        let per_tree: usize = self
            .trees
            .iter()
            .map(|t| t.lca.words() + t.depth.len() + t.lookup.len() * 2 + t.tree.vertices.len() * 3)
            .sum();
        SizeStats {
            tree_count: self.trees.len(),
            total_words: per_tree + membership_words,
            membership_words,
        }
    }
}

/// Batch measurement: answers are deterministic, wall-clock is reported
/// separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub queries: usize,
    pub answers: Vec<f64>,
    pub trees_probed_total: usize,
    pub wall_nanos: u128,
    pub size: SizeStats,
}

pub fn bench(o: &Oracle, pairs: &[(Vertex, Vertex)]) -> Result<BenchReport, OracleError> {
    let mut answers = Vec::with_capacity(pairs.len());
    let mut probed = 0usize;
    let start = Instant::now();
    for &(u, v) in pairs {
        answers.push(o.query(u, v)?);
    }
    let wall_nanos = start.elapsed().as_nanos();
    for &(u, v) in pairs {
        probed += o.trees_probed(u, v);
    }
    Ok(BenchReport {
        queries: pairs.len(),
        answers,
        trees_probed_total: probed,
        wall_nanos,
        size: o.size_stats(),
    })
}

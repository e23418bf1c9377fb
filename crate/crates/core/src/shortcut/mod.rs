//! Shortcut partition: clustering a buffered cop decomposition through a
//! net on each skeleton.
//!
//! Each supernode is split into clusters around a `delta`-net of its
//! skeleton (pairwise net distance `> delta`, every skeleton vertex
//! within `delta` of the net, both measured along the skeleton), and the
//! remaining supernode vertices follow their multi-source Dijkstra
//! parents to the nearest net point. Clusters end up connected, confined
//! to one supernode each, and of strong diameter at most `4 * delta`.
//! The payoff is measured by [`path_cost`]: the minimum number of
//! cluster-graph hops between a path's endpoint clusters, using only
//! clusters the path touches.

pub mod verify;

use crate::copdecomp::{CopDecomposition, SupernodeId};
use crate::graph::{
    diameter, multi_source_sssp, GraphError, PathWitness, Restrict, Topology, Vertex, WeightedGraph,
};
use crate::DecompositionError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub type ClusterId = u32;

#[derive(Debug, Error, PartialEq)]
pub enum ClusteringError {
    #[error("vertex {0} is not covered by the clustering")]
    UnknownVertex(Vertex),
    #[error("sequence is not a path in the host graph at position {0}")]
    NotAPath(usize),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: ClusterId,
    /// The net point the cluster grew from.
    pub center: Vertex,
    /// Members, ascending; always includes the center.
    pub vertices: Vec<Vertex>,
    /// The supernode all members belong to.
    pub supernode: SupernodeId,
}

impl Cluster {
    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Partition of the decomposed graph into connected clusters with
/// centers; strong diameter is bounded by `4 * delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    /// Net spacing parameter of the build (not the diameter bound).
    pub delta: f64,
    pub clusters: Vec<Cluster>,
    /// `owner[v]` is the cluster owning `v`; `ClusterId::MAX` outside the
    /// clustered vertex set.
    pub owner: Vec<ClusterId>,
}

impl Clustering {
    pub fn from_parts(delta: f64, clusters: Vec<Cluster>, id_space: usize) -> Self {
        let mut owner = vec![ClusterId::MAX; id_space];
        for c in &clusters {
            for &v in &c.vertices {
                owner[v as usize] = c.id;
            }
        }
        Self {
            delta,
            clusters,
            owner,
        }
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn owner_of(&self, v: Vertex) -> Option<ClusterId> {
        match self.owner.get(v as usize) {
            Some(&c) if c != ClusterId::MAX => Some(c),
            _ => None,
        }
    }

    /// Strong-diameter bound guaranteed by the construction.
    pub fn diameter_bound(&self) -> f64 {
        4.0 * self.delta
    }
}

/// Unweighted graph over clusters: an edge wherever some host edge joins
/// two different clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterGraph {
    adj: Vec<Vec<ClusterId>>,
    edge_count: usize,
}

impl ClusterGraph {
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, c: ClusterId) -> &[ClusterId] {
        &self.adj[c as usize]
    }

    pub fn are_adjacent(&self, a: ClusterId, b: ClusterId) -> bool {
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Minimum hop count from `from` to `to` using only clusters in
    /// `allowed`; `None` when no such path exists.
    pub fn restricted_hops(
        &self,
        from: ClusterId,
        to: ClusterId,
        allowed: &[ClusterId],
    ) -> Option<u32> {
        let mut ok = vec![false; self.adj.len()];
        for &c in allowed {
            ok[c as usize] = true;
        }
        if !ok[from as usize] || !ok[to as usize] {
            return None;
        }
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        dist[from as usize] = 0;
        queue.push_back(from);
        while let Some(c) = queue.pop_front() {
            if c == to {
                return Some(dist[c as usize]);
            }
            for &nb in &self.adj[c as usize] {
                if ok[nb as usize] && dist[nb as usize] == u32::MAX {
                    dist[nb as usize] = dist[c as usize] + 1;
                    queue.push_back(nb);
                }
            }
        }
        None
    }

    /// Hop-minimal cluster path restricted to `allowed`, as a sequence of
    /// cluster ids. BFS explores neighbors in ascending id order, so the
    /// returned path is deterministic.
    pub fn restricted_path(
        &self,
        from: ClusterId,
        to: ClusterId,
        allowed: &[ClusterId],
    ) -> Option<Vec<ClusterId>> {
        let mut ok = vec![false; self.adj.len()];
        for &c in allowed {
            ok[c as usize] = true;
        }
        if !ok[from as usize] || !ok[to as usize] {
            return None;
        }
        let mut prev: Vec<Option<ClusterId>> = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        seen[from as usize] = true;
        queue.push_back(from);
        while let Some(c) = queue.pop_front() {
            if c == to {
                let mut path = vec![to];
                let mut cur = to;
                while let Some(p) = prev[cur as usize] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &nb in &self.adj[c as usize] {
                if ok[nb as usize] && !seen[nb as usize] {
                    seen[nb as usize] = true;
                    prev[nb as usize] = Some(c);
                    queue.push_back(nb);
                }
            }
        }
        None
    }
}

/// Contracts each cluster to a node; deterministic node order is cluster
/// id order.
pub fn cluster_graph<T: Topology>(g: &T, c: &Clustering) -> ClusterGraph {
    cluster_graph_from_owner(g, &c.owner, c.cluster_count())
}

/// Cluster graph from a bare owner map (`ClusterId::MAX` = unclustered).
pub fn cluster_graph_from_owner<T: Topology>(
    g: &T,
    owner: &[ClusterId],
    count: usize,
) -> ClusterGraph {
    let mut adj: Vec<Vec<ClusterId>> = vec![Vec::new(); count];
    for v in g.vertices() {
        for (u, _) in g.neighbors(v) {
            if u <= v {
                continue;
            }
            let (a, b) = (owner[v as usize], owner[u as usize]);
            if a != b && a != ClusterId::MAX && b != ClusterId::MAX {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
    }
    let mut edge_count = 0;
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
        edge_count += list.len();
    }
    ClusterGraph {
        adj,
        edge_count: edge_count / 2,
    }
}

/// Weighted depths and parent hops of a skeleton, for exact tree
/// distances.
struct SkeletonMetrics {
    depth_w: BTreeMap<Vertex, f64>,
    depth_h: BTreeMap<Vertex, u32>,
    parent: BTreeMap<Vertex, Vertex>,
}

impl SkeletonMetrics {
    fn new<T: Topology>(g: &T, skel: &crate::copdecomp::Skeleton) -> Self {
        let mut children: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        let mut parent = BTreeMap::new();
        for &(child, par) in skel.links() {
            children.entry(par).or_default().push(child);
            parent.insert(child, par);
        }
        let mut depth_w = BTreeMap::new();
        let mut depth_h = BTreeMap::new();
        depth_w.insert(skel.root(), 0.0);
        depth_h.insert(skel.root(), 0u32);
        let mut queue = std::collections::VecDeque::from([skel.root()]);
        while let Some(v) = queue.pop_front() {
            for &ch in children.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                let w = g
                    .neighbors(ch)
                    .find(|&(u, _)| u == v)
                    .map(|(_, w)| w)
                    .expect("skeleton link is a graph edge");
                depth_w.insert(ch, depth_w[&v] + w);
                depth_h.insert(ch, depth_h[&v] + 1);
                queue.push_back(ch);
            }
        }
        Self {
            depth_w,
            depth_h,
            parent,
        }
    }

    /// BFS order from the root, children ascending.
    fn bfs_order(&self, skel: &crate::copdecomp::Skeleton) -> Vec<Vertex> {
        let mut children: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for &(child, par) in skel.links() {
            children.entry(par).or_default().push(child);
        }
        let mut order = Vec::with_capacity(skel.members().len());
        let mut queue = std::collections::VecDeque::from([skel.root()]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            if let Some(chs) = children.get(&v) {
                queue.extend(chs);
            }
        }
        order
    }

    fn dist(&self, mut a: Vertex, mut b: Vertex) -> f64 {
        let (da, db) = (self.depth_w[&a], self.depth_w[&b]);
        let (mut ha, mut hb) = (self.depth_h[&a], self.depth_h[&b]);
        while ha > hb {
            a = self.parent[&a];
            ha -= 1;
        }
        while hb > ha {
            b = self.parent[&b];
            hb -= 1;
        }
        while a != b {
            a = self.parent[&a];
            b = self.parent[&b];
        }
        da + db - 2.0 * self.depth_w[&a]
    }
}

/// Builds the clustering of a buffered cop decomposition: a greedy
/// `delta`-net on each skeleton, then nearest-net assignment of the
/// supernode's remaining vertices along deterministic Dijkstra parents.
pub fn build_partition<T: Topology>(g: &T, dec: &CopDecomposition) -> Clustering {
    let delta = dec.delta;
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut owner = vec![ClusterId::MAX; g.id_space()];

    for s in &dec.supernodes {
        let metrics = SkeletonMetrics::new(g, &s.skeleton);
        let order = metrics.bfs_order(&s.skeleton);

        let mut net: Vec<Vertex> = Vec::new();
        for &v in &order {
            let covered = net.iter().any(|&c| metrics.dist(v, c) <= delta);
            if !covered {
                net.push(v);
            }
        }
        for (i, &a) in net.iter().enumerate() {
            assert!(
                net[i + 1..].iter().all(|&b| metrics.dist(a, b) > delta),
                "net spacing violated in supernode {}",
                s.id
            );
        }
        for &v in &order {
            assert!(
                net.iter().any(|&c| metrics.dist(v, c) <= delta),
                "net coverage violated in supernode {}",
                s.id
            );
        }

        let base = clusters.len() as ClusterId;
        let scope = Restrict::new(g, &s.vertices);
        let paths = multi_source_sssp(&scope, &net).expect("net is non-empty");
        let index_of: BTreeMap<Vertex, ClusterId> = net
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, base + i as ClusterId))
            .collect();
        let mut members: Vec<Vec<Vertex>> = vec![Vec::new(); net.len()];
        for &v in &s.vertices {
            let d = paths.dist(v);
            assert!(
                d.is_finite(),
                "vertex {v} unreachable from the net inside supernode {}",
                s.id
            );
            let nearest = paths.nearest(v).expect("finite distance has a source");
            let cid = index_of[&nearest];
            owner[v as usize] = cid;
            members[(cid - base) as usize].push(v);
        }
        for (i, center) in net.into_iter().enumerate() {
            let mut vs = std::mem::take(&mut members[i]);
            vs.sort_unstable();
            clusters.push(Cluster {
                id: base + i as ClusterId,
                center,
                vertices: vs,
                supernode: s.id,
            });
        }
    }

    Clustering {
        delta,
        clusters,
        owner,
    }
}

/// Decomposes and clusters in one go so that clusters have strong
/// diameter at most `target_diameter` (net parameter `target / 4`).
pub fn partition_with_diameter<T: Topology>(
    g: &T,
    r: u32,
    target_diameter: f64,
) -> Result<(CopDecomposition, Clustering), ClusteringError> {
    let dec = crate::copdecomp::build_decomposition(g, r, target_diameter / 4.0)?;
    let clustering = build_partition(g, &dec);
    Ok((dec, clustering))
}

/// Epsilon-facing build: cluster strong diameter at most
/// `eps * diam(g)`.
pub fn partition_for_epsilon(
    g: &WeightedGraph,
    r: u32,
    eps: f64,
) -> Result<(CopDecomposition, Clustering), ClusteringError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ClusteringError::BadEpsilon(eps));
    }
    let diam = diameter(g)?;
    partition_with_diameter(g, r, eps * diam)
}

/// Outcome of a cluster-path search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathCost {
    Hops(u32),
    /// No restricted cluster path exists; cannot happen for partitions
    /// built by this module (asserted by the verifier).
    Disconnected,
}

impl PathCost {
    pub fn hops(self) -> Option<u32> {
        match self {
            PathCost::Hops(h) => Some(h),
            PathCost::Disconnected => None,
        }
    }
}

/// Minimum hop-length of a cluster path between the endpoint clusters of
/// `p`, using only clusters that intersect `p`.
pub fn path_cost(
    c: &Clustering,
    gg: &ClusterGraph,
    p: &PathWitness,
) -> Result<PathCost, ClusteringError> {
    let mut allowed: Vec<ClusterId> = Vec::new();
    for &v in p.vertices() {
        match c.owner_of(v) {
            Some(cl) => allowed.push(cl),
            None => return Err(ClusteringError::UnknownVertex(v)),
        }
    }
    allowed.sort_unstable();
    allowed.dedup();
    let from = c.owner_of(p.first()).expect("checked above");
    let to = c.owner_of(p.last()).expect("checked above");
    if from == to {
        return Ok(PathCost::Hops(0));
    }
    Ok(match gg.restricted_hops(from, to, &allowed) {
        Some(h) => PathCost::Hops(h),
        None => PathCost::Disconnected,
    })
}

#[cfg(test)]
mod tests;

//! `(1 + eps)` tree covers by star expansion.
//!
//! Per scale `2^i` the graph is clustered with cluster strong diameter
//! `eps * 2^i / 2` (net parameter `eps * 2^i / 8`). Each cluster grows a
//! demand ball — every cluster holding a vertex within `2^i` of it — and
//! a breadth-first tree of the cluster graph out to the smallest depth
//! covering that demand. Star-expanding the ball (root = the cluster's
//! center, edge weight = exact graph distance to the root) yields a
//! dominating Steiner-free tree; a pair at distance within the scale is
//! covered by the tree of either endpoint's cluster with additive error
//! at most `eps * 2^i / 2`, through the root by star shape.
//!
//! Scales run from the minimum edge weight up to the diameter with
//! per-scale budget `eps / 2`, so bucketing a pair into the scale just
//! above its distance turns the additive error into a `1 + eps`
//! multiplicative stretch. Trees pointwise dominated by an earlier tree
//! of the same scale are pruned, and the survivors are packed greedily
//! into vertex-disjoint forests.

use crate::graph::{
    diameter, is_connected, multi_source_sssp, sssp, GraphError, Topology, Vertex, WeightedGraph,
};
use crate::report::Report;
use crate::shortcut::{
    cluster_graph, partition_with_diameter, ClusterId, Clustering, ClusteringError,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CoverError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Clustering(#[from] ClusteringError),
}

/// Star over host vertices: every member hangs off the root at its exact
/// graph distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarTree {
    pub root: Vertex,
    /// Members, ascending; always includes the root.
    pub members: Vec<Vertex>,
    /// `weights[i]` is the exact host distance from `members[i]` to the
    /// root.
    pub weights: Vec<f64>,
    /// Clusters whose union forms the member set.
    pub source_clusters: Vec<ClusterId>,
    /// Scale index `i` (the tree serves pairs at distance up to `2^i`).
    pub scale: i32,
    /// Forest the tree was packed into (within its scale).
    pub forest: u32,
}

impl StarTree {
    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn weight_to_root(&self, v: Vertex) -> Option<f64> {
        self.members.binary_search(&v).ok().map(|i| self.weights[i])
    }

    /// Tree distance between two members (`None` if either is missing).
    pub fn tree_dist(&self, u: Vertex, v: Vertex) -> Option<f64> {
        if u == v {
            return self.contains(u).then_some(0.0);
        }
        Some(self.weight_to_root(u)? + self.weight_to_root(v)?)
    }
}

/// Cover: dominating star trees grouped into per-scale vertex-disjoint
/// forests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeCover {
    pub epsilon: f64,
    /// Vertex id space of the host graph.
    pub n: usize,
    pub scale_lo: i32,
    pub scale_hi: i32,
    pub trees: Vec<StarTree>,
}

impl TreeCover {
    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    /// Trees per scale, ascending scale.
    pub fn scale_profile(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for t in &self.trees {
            *m.entry(t.scale).or_insert(0) += 1;
        }
        m
    }

    /// The scale designated to serve a pair at distance `d > 0`.
    pub fn scale_for(&self, d: f64) -> i32 {
        (d.log2().ceil() as i32).clamp(self.scale_lo, self.scale_hi)
    }

    /// Per-scale additive error budget.
    pub fn scale_budget(&self) -> f64 {
        self.epsilon / 2.0
    }
}

/// Builds the scale-`scale_delta` layer: one star tree per cluster,
/// covering the cluster's demand ball. `eps` is this layer's additive
/// budget (the full cover passes `epsilon / 2`).
pub fn additive_cover_at_scale(
    g: &WeightedGraph,
    scale_delta: f64,
    eps: f64,
    r: u32,
) -> Result<Vec<StarTree>, CoverError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CoverError::BadEpsilon(eps));
    }
    let (_, clustering) = partition_with_diameter(g, r, eps * scale_delta / 2.0)?;
    let mut trees = star_expansion(g, &clustering, scale_delta);
    prune_dominated(&mut trees);
    pack_forests(&mut trees, g.vertex_count());
    Ok(trees)
}

/// Star-expands a clustering at reach `scale_delta`: per cluster, the
/// demand set (clusters holding a vertex within `scale_delta` of it),
/// the breadth-first cluster-graph tree out to the smallest depth
/// covering that demand, and a star over the tree's vertices rooted at
/// the cluster's center with exact root distances as weights.
pub fn star_expansion(
    g: &WeightedGraph,
    clustering: &Clustering,
    scale_delta: f64,
) -> Vec<StarTree> {
    let cg = cluster_graph(g, clustering);
    let order: Vec<ClusterId> = (0..clustering.cluster_count() as ClusterId).collect();
    order
        .par_iter()
        .map(|&a| {
            let cluster = &clustering.clusters[a as usize];
            let ball = multi_source_sssp(g, &cluster.vertices).expect("cluster non-empty");
            let mut demand: Vec<ClusterId> = g
                .vertices()
                .filter(|&v| ball.dist(v) <= scale_delta)
                .map(|v| clustering.owner[v as usize])
                .collect();
            demand.sort_unstable();
            demand.dedup();

            // breadth-first depths in the cluster graph from a
            let mut depth = vec![u32::MAX; clustering.cluster_count()];
            let mut queue = std::collections::VecDeque::from([a]);
            depth[a as usize] = 0;
            while let Some(c) = queue.pop_front() {
                for &nb in cg.neighbors(c) {
                    if depth[nb as usize] == u32::MAX {
                        depth[nb as usize] = depth[c as usize] + 1;
                        queue.push_back(nb);
                    }
                }
            }
            let radius = demand
                .iter()
                .map(|&c| depth[c as usize])
                .max()
                .expect("demand contains the cluster itself");

            let mut source_clusters: Vec<ClusterId> = (0..clustering.cluster_count() as ClusterId)
                .filter(|&c| depth[c as usize] <= radius)
                .collect();
            source_clusters.sort_unstable();
            let mut members: Vec<Vertex> = source_clusters
                .iter()
                .flat_map(|&c| clustering.clusters[c as usize].vertices.iter().copied())
                .collect();
            members.sort_unstable();

            let root = cluster.center;
            let from_root = sssp(g, root).expect("center is a vertex");
            let weights: Vec<f64> = members.iter().map(|&v| from_root.dist(v)).collect();
            StarTree {
                root,
                members,
                weights,
                source_clusters,
                scale: 0,
                forest: 0,
            }
        })
        .collect()
}

/// Drops trees whose every pairwise distance is matched or beaten by an
/// earlier kept tree covering a superset of members. Safe: the minimum
/// over remaining trees is unchanged for every pair.
fn prune_dominated(trees: &mut Vec<StarTree>) {
    let mut kept: Vec<StarTree> = Vec::new();
    'next: for tree in trees.drain(..) {
        for k in &kept {
            if dominates(k, &tree) {
                continue 'next;
            }
        }
        kept.push(tree);
    }
    *trees = kept;
}

fn dominates(a: &StarTree, b: &StarTree) -> bool {
    if b.members.len() > a.members.len() {
        return false;
    }
    // gap(u) = w_a(u) - w_b(u); a dominates b iff gap(u) + gap(v) <= 0
    // for every pair, i.e. the two largest gaps sum to at most 0.
    let mut top = [f64::NEG_INFINITY; 2];
    for (i, &v) in b.members.iter().enumerate() {
        let Some(wa) = a.weight_to_root(v) else {
            return false;
        };
        let gap = wa - b.weights[i];
        if gap > top[0] {
            top[1] = top[0];
            top[0] = gap;
        } else if gap > top[1] {
            top[1] = gap;
        }
    }
    b.members.len() < 2 || top[0] + top[1] <= 0.0
}

/// First-fit packing into vertex-disjoint forests.
fn pack_forests(trees: &mut [StarTree], n: usize) {
    let mut occupancy: Vec<Vec<bool>> = Vec::new();
    for tree in trees.iter_mut() {
        let slot = occupancy
            .iter()
            .position(|used| tree.members.iter().all(|&v| !used[v as usize]))
            .unwrap_or_else(|| {
                occupancy.push(vec![false; n]);
                occupancy.len() - 1
            });
        for &v in &tree.members {
            occupancy[slot][v as usize] = true;
        }
        tree.forest = slot as u32;
    }
}

/// Builds the full cover: scales `2^i` from the minimum edge weight up
/// to the diameter, each with additive budget `eps / 2`.
pub fn build_tree_cover(g: &WeightedGraph, eps: f64, r: u32) -> Result<TreeCover, CoverError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CoverError::BadEpsilon(eps));
    }
    let n = g.vertex_count();
    if n == 0 || !is_connected(g) {
        return Err(CoverError::Graph(GraphError::Disconnected));
    }
    if n == 1 {
        return Ok(TreeCover {
            epsilon: eps,
            n,
            scale_lo: 0,
            scale_hi: 0,
            trees: vec![StarTree {
                root: 0,
                members: vec![0],
                weights: vec![0.0],
                source_clusters: vec![0],
                scale: 0,
                forest: 0,
            }],
        });
    }

    let w_min = g.min_edge_weight().expect("connected with n >= 2");
    let diam = diameter(g)?;
    let scale_lo = w_min.log2().ceil() as i32;
    let scale_hi = diam.log2().ceil() as i32;
    let budget = eps / 2.0;

    let mut trees = Vec::new();
    for i in scale_lo..=scale_hi {
        let scale_delta = 2.0f64.powi(i);
        let mut layer = additive_cover_at_scale(g, scale_delta, budget, r)?;
        for t in &mut layer {
            t.scale = i;
        }
        trees.extend(layer);
    }
    Ok(TreeCover {
        epsilon: eps,
        n,
        scale_lo,
        scale_hi,
        trees,
    })
}

/// Exhaustive cover audit over all vertex pairs.
#[derive(Debug, Clone)]
pub struct CoverReport {
    pub report: Report,
    pub max_stretch: f64,
    pub uncovered_pairs: usize,
    pub dominance_violations: usize,
    pub tree_count: usize,
    pub forest_count: usize,
    pub trees_per_scale: BTreeMap<i32, usize>,
}

/// Sampled audit for hosts too large for the all-pairs run: coverage,
/// stretch, dominance, and the scale contract on a seeded pair sample.
pub fn verify_cover_sampled(
    tc: &TreeCover,
    g: &WeightedGraph,
    seed: u64,
    count: usize,
) -> CoverReport {
    use rand::{Rng, SeedableRng};
    let mut rep = Report::new("tree-cover-sampled");
    let n = g.vertex_count();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(count);
    if n >= 2 {
        while pairs.len() < count {
            let u = rng.gen_range(0..n as Vertex);
            let v = rng.gen_range(0..n as Vertex);
            if u != v {
                pairs.push((u.min(v), u.max(v)));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let mut by_source: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for (u, v) in pairs {
        by_source.entry(u).or_default().push(v);
    }
    let budget = tc.scale_budget();
    let mut max_stretch = 1.0f64;
    let mut uncovered = 0usize;
    let mut dominance = 0usize;
    for (u, targets) in by_source {
        let sp = sssp(g, u).expect("vertex in host");
        for v in targets {
            let d = sp.dist(v);
            let mut best = f64::INFINITY;
            for t in &tc.trees {
                if let Some(dt) = t.tree_dist(u, v) {
                    if dt < d {
                        dominance += 1;
                        rep.violation(format!("dominance broken for ({u}, {v}): {dt} < {d}"));
                    }
                    best = best.min(dt);
                }
            }
            if best.is_infinite() {
                uncovered += 1;
                rep.violation(format!("pair ({u}, {v}) is covered by no tree"));
                continue;
            }
            max_stretch = max_stretch.max(best / d);
            let scale = tc.scale_for(d);
            let cap = d + budget * 2.0f64.powi(scale);
            if !tc
                .trees
                .iter()
                .any(|t| t.scale == scale && t.tree_dist(u, v).is_some_and(|dt| dt <= cap))
            {
                rep.violation(format!(
                    "pair ({u}, {v}) at distance {d}: no scale-{scale} tree within additive cap {cap}"
                ));
            }
        }
    }
    CoverReport {
        report: rep,
        max_stretch,
        uncovered_pairs: uncovered,
        dominance_violations: dominance,
        tree_count: tc.tree_count(),
        forest_count: tc
            .trees
            .iter()
            .map(|t| (t.scale, t.forest))
            .collect::<std::collections::BTreeSet<_>>()
            .len(),
        trees_per_scale: tc.scale_profile(),
    }
}

/// All-pairs audit: dominance per tree, coverage and stretch per pair,
/// per-scale root-preservation error, forest disjointness.
pub fn verify_cover(tc: &TreeCover, g: &WeightedGraph) -> CoverReport {
    let mut rep = Report::new("tree-cover");
    let n = g.vertex_count();

    // membership index
    let mut trees_of: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, t) in tc.trees.iter().enumerate() {
        for &v in &t.members {
            trees_of[v as usize].push(i as u32);
        }
    }

    let all_dist: Vec<crate::graph::ShortestPaths> = (0..n as Vertex)
        .into_par_iter()
        .map(|v| sssp(g, v).expect("vertex in host"))
        .collect();

    // dominance: tree distances never undercut host distances
    let per_tree: Vec<(usize, Option<String>)> = tc
        .trees
        .par_iter()
        .enumerate()
        .map(|(ti, t)| {
            let mut bad = 0;
            let mut sample = None;
            for (i, &u) in t.members.iter().enumerate() {
                for (j, &v) in t.members.iter().enumerate().skip(i + 1) {
                    let d_t = t.weights[i] + t.weights[j];
                    if d_t < all_dist[u as usize].dist(v) {
                        bad += 1;
                        sample.get_or_insert_with(|| {
                            format!(
                                "tree {ti}: dominance broken for ({u}, {v}): {d_t} < {}",
                                all_dist[u as usize].dist(v)
                            )
                        });
                    }
                }
            }
            (bad, sample)
        })
        .collect();
    let dominance_violations: usize = per_tree.iter().map(|(b, _)| b).sum();
    for (_, sample) in per_tree {
        if let Some(msg) = sample {
            rep.violation(msg);
        }
    }

    // exact weights: every stored weight equals the host distance
    for (ti, t) in tc.trees.iter().enumerate() {
        for (i, &v) in t.members.iter().enumerate() {
            let exact = all_dist[t.root as usize].dist(v);
            if t.weights[i] != exact {
                rep.violation(format!(
                    "tree {ti}: weight of member {v} is {}, exact distance {exact}",
                    t.weights[i]
                ));
            }
        }
        if !t.contains(t.root) {
            rep.violation(format!("tree {ti}: root {} is not a member", t.root));
        }
    }

    // coverage, stretch, and the per-scale additive contract
    let budget = tc.scale_budget();
    let mut max_stretch = 1.0f64;
    let mut uncovered = 0usize;
    for u in 0..n as Vertex {
        for v in (u + 1)..n as Vertex {
            let d = all_dist[u as usize].dist(v);
            let mut best = f64::INFINITY;
            let (mut iu, mut iv) = (0, 0);
            let (tu, tv) = (&trees_of[u as usize], &trees_of[v as usize]);
            while iu < tu.len() && iv < tv.len() {
                match tu[iu].cmp(&tv[iv]) {
                    std::cmp::Ordering::Less => iu += 1,
                    std::cmp::Ordering::Greater => iv += 1,
                    std::cmp::Ordering::Equal => {
                        let t = &tc.trees[tu[iu] as usize];
                        let dt = t.tree_dist(u, v).expect("both members");
                        best = best.min(dt);
                        iu += 1;
                        iv += 1;
                    }
                }
            }
            if best.is_infinite() {
                uncovered += 1;
                if uncovered <= 8 {
                    rep.violation(format!("pair ({u}, {v}) is covered by no tree"));
                }
                continue;
            }
            max_stretch = max_stretch.max(best / d);

            // scale contract: the designated scale serves the pair within
            // its additive budget
            let scale = tc.scale_for(d);
            let cap = d + budget * 2.0f64.powi(scale);
            let served = tc
                .trees
                .iter()
                .any(|t| t.scale == scale && t.tree_dist(u, v).is_some_and(|dt| dt <= cap));
            if !served {
                rep.violation(format!(
                    "pair ({u}, {v}) at distance {d}: no scale-{scale} tree within additive cap {cap}"
                ));
            }
        }
    }
    if uncovered > 8 {
        rep.violation(format!("... {uncovered} uncovered pairs in total"));
    }

    // forest disjointness
    let mut groups: BTreeMap<(i32, u32), Vec<usize>> = BTreeMap::new();
    for (i, t) in tc.trees.iter().enumerate() {
        groups.entry((t.scale, t.forest)).or_default().push(i);
    }
    let forest_count = groups.len();
    for ((scale, forest), idxs) in &groups {
        let mut seen = vec![false; n];
        for &i in idxs {
            for &v in &tc.trees[i].members {
                if seen[v as usize] {
                    rep.violation(format!(
                        "forest {forest} at scale {scale}: vertex {v} appears in two trees"
                    ));
                }
                seen[v as usize] = true;
            }
        }
    }

    CoverReport {
        report: rep,
        max_stretch,
        uncovered_pairs: uncovered,
        dominance_violations,
        tree_count: tc.tree_count(),
        forest_count,
        trees_per_scale: tc.scale_profile(),
    }
}

//! Approximate scattering partitions and Steiner point removal.
//!
//! A scattering partition with distance budget `delta` clusters a
//! (sub)graph so that every cluster has weak diameter at most `delta`
//! and every pair at distance at most `delta` admits a witness path made
//! of short edges that crosses few clusters. It is built by dropping
//! edges longer than `delta` and running the shortcut machinery on each
//! residual component. The scattering quality (`beta`, `tau`) is not an
//! input: [`scattered_path`] measures it per pair.
//!
//! [`spr::solve`] uses these partitions at geometric scales to contract
//! a graph onto a terminal set while approximately preserving terminal
//! distances.

pub mod spr;

use crate::graph::{
    connected_components, diameter, sssp, GraphError, PathWitness, Restrict, Topology, Vertex,
    WeightedGraph,
};
use crate::report::Report;
use crate::shortcut::{cluster_graph_from_owner, partition_with_diameter, ClusterGraph, ClusterId};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ScatterError {
    #[error("vertices {0} and {1} are farther apart than the budget {2}")]
    PairTooFar(Vertex, Vertex, f64),
    #[error("vertex {0} is not covered by the partition")]
    UnknownVertex(Vertex),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterCluster {
    pub id: ClusterId,
    pub center: Vertex,
    /// Members, ascending.
    pub vertices: Vec<Vertex>,
}

/// Clustering of a (sub)graph where every cluster has weak diameter at
/// most `delta` in the host graph.
#[derive(Debug, Clone)]
pub struct ScatteringPartition {
    pub delta: f64,
    pub r: u32,
    pub clusters: Vec<ScatterCluster>,
    /// `owner[v]`; `ClusterId::MAX` outside the partitioned vertex set.
    pub owner: Vec<ClusterId>,
    /// Host edges of weight at most `delta`, restricted to the
    /// partitioned vertices.
    residual: WeightedGraph,
    members: Vec<Vertex>,
    cg: ClusterGraph,
}

impl ScatteringPartition {
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn owner_of(&self, v: Vertex) -> Option<ClusterId> {
        match self.owner.get(v as usize) {
            Some(&c) if c != ClusterId::MAX => Some(c),
            _ => None,
        }
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn cluster_graph(&self) -> &ClusterGraph {
        &self.cg
    }
}

/// Per-pair scattering measurement returned with each witness path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterStats {
    /// Distinct clusters the witness path touches (the measured tau).
    pub clusters_touched: u32,
    /// Path length divided by the budget (the measured beta).
    pub beta: f64,
    pub length: f64,
    /// Largest edge weight on the witness path.
    pub max_edge: f64,
}

/// Builds a scattering partition with budget `delta`: drop edges longer
/// than `delta`, then cluster every residual component — as a single
/// cluster when its diameter already fits the budget, otherwise through
/// a cop decomposition and shortcut partition with cluster strong
/// diameter at most `delta`.
pub fn scattering_from_shortcut<T: Topology>(g: &T, delta: f64, r: u32) -> ScatteringPartition {
    assert!(delta > 0.0, "scattering budget must be positive");
    let members: Vec<Vertex> = g.vertices().collect();
    let mut edges = Vec::new();
    for v in g.vertices() {
        for (u, w) in g.neighbors(v) {
            if v < u && w <= delta {
                edges.push((v, u, w));
            }
        }
    }
    let residual = WeightedGraph::from_edges(g.id_space(), edges)
        .expect("host edges are valid by construction");

    let mut clusters: Vec<ScatterCluster> = Vec::new();
    let mut owner = vec![ClusterId::MAX; g.id_space()];
    for comp in connected_components(&Restrict::new(&residual, &members)) {
        let base = clusters.len() as ClusterId;
        if comp.len() == 1 {
            owner[comp[0] as usize] = base;
            clusters.push(ScatterCluster {
                id: base,
                center: comp[0],
                vertices: comp,
            });
            continue;
        }
        let scope = Restrict::new(&residual, &comp);
        let comp_diam = diameter(&scope).expect("component is connected");
        if comp_diam <= delta {
            for &v in &comp {
                owner[v as usize] = base;
            }
            clusters.push(ScatterCluster {
                id: base,
                center: comp[0],
                vertices: comp,
            });
            continue;
        }
        let (_, clustering) =
            partition_with_diameter(&scope, r, delta).expect("component is connected");
        for cl in clustering.clusters {
            let id = base + cl.id;
            for &v in &cl.vertices {
                owner[v as usize] = id;
            }
            clusters.push(ScatterCluster {
                id,
                center: cl.center,
                vertices: cl.vertices,
            });
        }
    }

    let cg = cluster_graph_from_owner(&Restrict::new(&residual, &members), &owner, clusters.len());
    ScatteringPartition {
        delta,
        r,
        clusters,
        owner,
        residual,
        members,
        cg,
    }
}

/// Finds a scattered witness path between `u` and `v`: the hop-minimal
/// cluster path restricted to clusters meeting a shortest residual
/// `u`-`v` path, stitched from intra-cluster shortest subpaths joined by
/// lexicographically-smallest inter-cluster edges.
///
/// Requires `dist(u, v) <= delta` in the host graph (equivalently in the
/// residual graph).
pub fn scattered_path(
    sp: &ScatteringPartition,
    u: Vertex,
    v: Vertex,
) -> Result<(PathWitness, ScatterStats), ScatterError> {
    let cu = sp.owner_of(u).ok_or(ScatterError::UnknownVertex(u))?;
    let cv = sp.owner_of(v).ok_or(ScatterError::UnknownVertex(v))?;
    if u == v {
        let path = PathWitness::new(&sp.residual, vec![u]).expect("single vertex");
        return Ok((
            path,
            ScatterStats {
                clusters_touched: 1,
                beta: 0.0,
                length: 0.0,
                max_edge: 0.0,
            },
        ));
    }

    let tree = sssp(&sp.residual, u)?;
    let guide = tree
        .path_to(&sp.residual, v)
        .filter(|p| p.length() <= sp.delta)
        .ok_or(ScatterError::PairTooFar(u, v, sp.delta))?;

    let mut allowed: Vec<ClusterId> = guide
        .vertices()
        .iter()
        .map(|&x| sp.owner_of(x).expect("members are clustered"))
        .collect();
    allowed.sort_unstable();
    allowed.dedup();

    let cluster_path = sp
        .cg
        .restricted_path(cu, cv, &allowed)
        .expect("owners along a residual path always chain up in the cluster graph");

    // stitch: shortest subpath inside each cluster, smallest / lexicographic
    // inter-cluster edge between consecutive clusters
    let mut seq: Vec<Vertex> = vec![u];
    let mut cursor = u;
    for hop in cluster_path.windows(2) {
        let (here, next) = (hop[0], hop[1]);
        let (exit, entry) = smallest_crossing_edge(sp, here, next);
        if exit != cursor {
            extend_within_cluster(sp, here, cursor, exit, &mut seq);
        }
        seq.push(entry);
        cursor = entry;
    }
    if cursor != v {
        extend_within_cluster(sp, *cluster_path.last().unwrap(), cursor, v, &mut seq);
    }

    let path = PathWitness::new(&sp.residual, seq).expect("stitched edges are residual edges");
    let mut touched: Vec<ClusterId> = path
        .vertices()
        .iter()
        .map(|&x| sp.owner_of(x).expect("members are clustered"))
        .collect();
    touched.sort_unstable();
    touched.dedup();
    let max_edge = path
        .vertices()
        .windows(2)
        .map(|e| {
            sp.residual
                .edge_weight(e[0], e[1])
                .expect("path edge exists")
        })
        .fold(0.0f64, f64::max);
    let stats = ScatterStats {
        clusters_touched: touched.len() as u32,
        beta: path.length() / sp.delta,
        length: path.length(),
        max_edge,
    };
    Ok((path, stats))
}

fn smallest_crossing_edge(
    sp: &ScatteringPartition,
    from: ClusterId,
    to: ClusterId,
) -> (Vertex, Vertex) {
    for &a in &sp.clusters[from as usize].vertices {
        for (b, _) in sp.residual.neighbors(a) {
            if sp.owner[b as usize] == to {
                return (a, b);
            }
        }
    }
    unreachable!("adjacent clusters share a residual edge")
}

fn extend_within_cluster(
    sp: &ScatteringPartition,
    cluster: ClusterId,
    from: Vertex,
    to: Vertex,
    seq: &mut Vec<Vertex>,
) {
    let scope = Restrict::new(&sp.residual, &sp.clusters[cluster as usize].vertices);
    let tree = sssp(&scope, from).expect("cluster member");
    let sub = tree
        .path_to(&scope, to)
        .expect("clusters are connected in the residual graph");
    seq.extend(&sub.vertices()[1..]);
}

/// Exact weak-diameter audit plus partition totality.
pub fn verify_scattering<T: Topology + Sync>(g: &T, sp: &ScatteringPartition) -> Report {
    let mut rep = Report::new("scattering");
    for &v in &sp.members {
        if sp.owner_of(v).is_none() {
            rep.violation(format!("vertex {v} not covered by any cluster"));
        }
    }
    let total: usize = sp.clusters.iter().map(|c| c.vertices.len()).sum();
    if total != sp.members.len() {
        rep.violation(format!(
            "cluster sizes sum to {total}, expected {}",
            sp.members.len()
        ));
    }
    let findings: Vec<String> = sp
        .clusters
        .par_iter()
        .flat_map(|cl| {
            let mut out = Vec::new();
            // weak diameter in the host graph
            for &a in &cl.vertices {
                let tree = sssp(g, a).expect("member of host");
                for &b in &cl.vertices {
                    let d = tree.dist(b);
                    if d > sp.delta {
                        out.push(format!(
                            "cluster {}: weak diameter {d} between {a} and {b} exceeds {}",
                            cl.id, sp.delta
                        ));
                    }
                }
            }
            out
        })
        .collect();
    rep.violations.extend(findings);
    rep.violations.sort();
    rep
}

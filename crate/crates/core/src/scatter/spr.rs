//! Steiner point removal: contract a weighted graph onto a terminal set.
//!
//! The solver assigns every vertex to a terminal in iterations. Iteration
//! `i` clusters the still-unassigned subgraph with a scattering partition
//! of budget `zeta^(i-1)`, keeps the clusters holding a vertex whose
//! distance to the terminal set lies in `[zeta^(i-1), zeta^i)`, levels
//! those clusters by BFS over edges of weight at most `zeta^i` anchored
//! at the assigned set, and folds each cluster into the branch of its
//! linking vertex, level by level. Contracting the final branch sets
//! yields a minor on the terminals whose edge weights are exact terminal
//! distances, so terminal distances never contract.

use super::{scattering_from_shortcut, ScatterCluster};
use crate::graph::{
    is_connected, multi_source_sssp, sssp, Restrict, Topology, Vertex, WeightedGraph,
};
use crate::report::Report;
use crate::shortcut::ClusterId;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SprError {
    #[error("terminal set is empty")]
    NoTerminals,
    #[error("terminal {0} is out of range")]
    UnknownTerminal(Vertex),
    #[error("zeta must exceed 4, got {0}")]
    BadZeta(f64),
    #[error("input graph must be connected")]
    Disconnected,
}

/// Tunables of the solver. `zeta` is the scale base of the iteration
/// (any value above 4 is sound; distortion is measured, not tuned);
/// `r` is the excluded-clique parameter handed to the internal
/// scattering partitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SprParams {
    pub zeta: f64,
    pub r: u32,
}

impl Default for SprParams {
    fn default() -> Self {
        Self { zeta: 16.0, r: 5 }
    }
}

/// One cluster folded into a branch during an iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterTrace {
    pub level: u32,
    pub linking_vertex: Vertex,
    pub terminal: Vertex,
    pub vertices: Vec<Vertex>,
}

/// Audit record of one solver iteration (distances in rescaled units
/// where the minimum pairwise distance is 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iteration: u32,
    /// Scattering budget `zeta^(i-1)` of this iteration.
    pub budget: f64,
    /// Relevant vertices: distance to the terminal set in
    /// `[zeta^(i-1), zeta^i)`.
    pub relevant: Vec<Vertex>,
    pub clusters: Vec<ClusterTrace>,
    pub max_level: u32,
    /// Assigned set size after the iteration.
    pub assigned_after: usize,
}

/// Distance-preserving terminal minor: branch map plus the contracted
/// weighted graph on the terminals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalMinor {
    /// Terminals, ascending.
    pub terminals: Vec<Vertex>,
    /// Branch map: `assign[v]` is the terminal whose branch set holds
    /// `v`.
    pub assign: Vec<Vertex>,
    /// Minor edges `(t, t', w)` with `t < t'`, ascending; `t` and `t'`
    /// are branch-adjacent in the host graph and `w` is their exact host
    /// distance.
    pub edges: Vec<(Vertex, Vertex, f64)>,
    pub params: SprParams,
    pub trace: Vec<IterationTrace>,
}

impl TerminalMinor {
    pub fn branch(&self, t: Vertex) -> Vec<Vertex> {
        (0..self.assign.len() as Vertex)
            .filter(|&v| self.assign[v as usize] == t)
            .collect()
    }

    /// The minor as a weighted graph; vertex `i` is `terminals[i]`.
    pub fn minor_graph(&self) -> WeightedGraph {
        let index: BTreeMap<Vertex, u32> = self
            .terminals
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i as u32))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|&(a, b, w)| (index[&a], index[&b], w));
        WeightedGraph::from_edges(self.terminals.len(), edges).expect("minor edges are valid")
    }

    /// The assigned set after `iteration` (0 = just the terminals),
    /// reconstructed from the trace.
    pub fn assigned_through(&self, iteration: u32) -> Vec<Vertex> {
        let mut out = self.terminals.clone();
        for it in self.trace.iter().filter(|t| t.iteration <= iteration) {
            for c in &it.clusters {
                out.extend_from_slice(&c.vertices);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Runs the iterative assignment and contracts the branch sets.
pub fn solve(
    g: &WeightedGraph,
    terminals: &[Vertex],
    params: SprParams,
) -> Result<TerminalMinor, SprError> {
    if terminals.is_empty() {
        return Err(SprError::NoTerminals);
    }
    if params.zeta.is_nan() || params.zeta <= 4.0 {
        return Err(SprError::BadZeta(params.zeta));
    }
    let n = g.vertex_count();
    let mut terms: Vec<Vertex> = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    if let Some(&bad) = terms.iter().find(|&&t| t as usize >= n) {
        return Err(SprError::UnknownTerminal(bad));
    }
    if !is_connected(g) {
        return Err(SprError::Disconnected);
    }

    let mut assign: Vec<Option<Vertex>> = vec![None; n];
    for &t in &terms {
        assign[t as usize] = Some(t);
    }
    let mut assigned = terms.len();
    let mut trace = Vec::new();

    if assigned < n {
        // rescale so the minimum pairwise distance is exactly 1
        let w_min = g.min_edge_weight().expect("n >= 2 and connected");
        let scaled = WeightedGraph::from_edges(n, g.edges().map(|(u, v, w)| (u, v, w / w_min)))
            .expect("rescaled weights stay positive");
        let dist_k = multi_source_sssp(&scaled, &terms).expect("terminals are vertices");

        let zeta = params.zeta;
        let max_dist = (0..n as Vertex)
            .map(|v| dist_k.dist(v))
            .fold(0.0f64, f64::max);
        // testable form of the assignment-horizon claim: everything is
        // assigned by iteration ceil(log_zeta(max dist to K)) + 1
        let iteration_cap = max_dist.log(zeta).ceil().max(0.0) as u32 + 1;

        let mut iteration = 0u32;
        while assigned < n {
            iteration += 1;
            assert!(
                iteration <= iteration_cap,
                "termination invariant violated: iteration {iteration} exceeds cap {iteration_cap}"
            );
            let budget = zeta.powi(iteration as i32 - 1);
            let reach = zeta.powi(iteration as i32);

            let unassigned: Vec<Vertex> = (0..n as Vertex)
                .filter(|&v| assign[v as usize].is_none())
                .collect();
            let relevant: Vec<Vertex> = unassigned
                .iter()
                .copied()
                .filter(|&v| budget <= dist_k.dist(v) && dist_k.dist(v) < reach)
                .collect();

            let live = Restrict::new(&scaled, &unassigned);
            let partition = scattering_from_shortcut(&live, budget, params.r);

            // clusters holding a relevant vertex get assigned this round
            let mut chosen: Vec<&ScatterCluster> = partition
                .clusters
                .iter()
                .filter(|c| {
                    c.vertices
                        .iter()
                        .any(|&v| budget <= dist_k.dist(v) && dist_k.dist(v) < reach)
                })
                .collect();
            chosen.sort_by_key(|c| c.id);

            let entries = level_and_link(&scaled, &partition.owner, &chosen, &assign, reach);
            let mut cluster_traces = Vec::with_capacity(entries.len());
            let mut max_level = 0u32;
            for (cluster, level, linking_vertex) in entries {
                let terminal = assign[linking_vertex as usize]
                    .expect("linking vertex was assigned on a lower level");
                for &v in &cluster.vertices {
                    debug_assert!(assign[v as usize].is_none());
                    assign[v as usize] = Some(terminal);
                }
                assigned += cluster.vertices.len();
                max_level = max_level.max(level);
                cluster_traces.push(ClusterTrace {
                    level,
                    linking_vertex,
                    terminal,
                    vertices: cluster.vertices.clone(),
                });
            }
            trace.push(IterationTrace {
                iteration,
                budget,
                relevant,
                clusters: cluster_traces,
                max_level,
                assigned_after: assigned,
            });
        }
    }

    let assign: Vec<Vertex> = assign
        .into_iter()
        .enumerate()
        .map(|(v, a)| a.unwrap_or_else(|| panic!("totality invariant violated: vertex {v}")))
        .collect();

    // contract: adjacency between branches, exact distances as weights
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
    for (u, v, _) in g.edges() {
        let (a, b) = (assign[u as usize], assign[v as usize]);
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let needed: Vec<Vertex> = {
        let mut s: Vec<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let dist_from: BTreeMap<Vertex, crate::graph::ShortestPaths> = needed
        .par_iter()
        .map(|&t| (t, sssp(g, t).expect("terminal in host")))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let edges: Vec<(Vertex, Vertex, f64)> = pairs
        .into_iter()
        .map(|(a, b)| (a, b, dist_from[&a].dist(b)))
        .collect();

    Ok(TerminalMinor {
        terminals: terms,
        assign,
        edges,
        params,
        trace,
    })
}

/// Levels the chosen clusters by BFS from the assigned set over edges of
/// weight at most `reach`, fixing for each cluster the lexicographically
/// smallest qualifying `(inside, outside)` edge into the previous level;
/// the outside endpoint is the linking vertex. Returns clusters in
/// `(level, cluster id)` order.
fn level_and_link<'a>(
    scaled: &WeightedGraph,
    owner: &[ClusterId],
    chosen: &[&'a ScatterCluster],
    assign: &[Option<Vertex>],
    reach: f64,
) -> Vec<(&'a ScatterCluster, u32, Vertex)> {
    let slot_of: BTreeMap<ClusterId, usize> =
        chosen.iter().enumerate().map(|(i, c)| (c.id, i)).collect();
    let mut level: Vec<Option<u32>> = vec![None; chosen.len()];
    let mut link: Vec<Option<Vertex>> = vec![None; chosen.len()];

    // frontier expansion: level 1 hangs off the assigned set, level j+1
    // off level j
    let mut current = 1u32;
    loop {
        let mut progressed = false;
        for (i, cluster) in chosen.iter().enumerate() {
            if level[i].is_some() {
                continue;
            }
            let mut best: Option<(Vertex, Vertex)> = None;
            for &u in &cluster.vertices {
                for (v, w) in scaled.neighbors(u) {
                    if w > reach {
                        continue;
                    }
                    let qualifies = if current == 1 {
                        assign[v as usize].is_some()
                    } else {
                        // linking into a chosen cluster of the previous level
                        owner.get(v as usize).is_some_and(|&c| {
                            c != ClusterId::MAX
                                && slot_of
                                    .get(&c)
                                    .is_some_and(|&j| level[j] == Some(current - 1))
                        })
                    };
                    if qualifies && best.is_none_or(|b| (u, v) < b) {
                        best = Some((u, v));
                    }
                }
            }
            if let Some((_, v)) = best {
                level[i] = Some(current);
                link[i] = Some(v);
                progressed = true;
            }
        }
        if level.iter().all(Option::is_some) {
            break;
        }
        assert!(
            progressed,
            "linking invariant violated: {} cluster(s) unreachable at level {current}",
            level.iter().filter(|l| l.is_none()).count()
        );
        current += 1;
    }

    let mut order: Vec<usize> = (0..chosen.len()).collect();
    order.sort_by_key(|&i| (level[i].unwrap(), chosen[i].id));
    order
        .into_iter()
        .map(|i| (chosen[i], level[i].unwrap(), link[i].unwrap()))
        .collect()
}

/// Distortion and validity audit of a terminal minor.
#[derive(Debug, Clone)]
pub struct MinorReport {
    pub report: Report,
    /// Max over terminal pairs of `d_M / d_G`.
    pub max_distortion: f64,
    /// Min over terminal pairs of `d_M / d_G` (non-contraction demands
    /// at least 1).
    pub min_distortion: f64,
    /// Max over non-terminals of `d_G(v, f(v)) / d_G(v, K)`.
    pub max_vertex_ratio: f64,
    /// Measured tau derived from the recorded levels
    /// (`max(1, ceil(max_level / zeta))`).
    pub tau_hat: f64,
    /// The audited per-vertex ceiling `3 * tau_hat * zeta^2`.
    pub vertex_ratio_bound: f64,
}

/// Checks branch validity, the exact edge/weight rule, non-contraction,
/// and the per-vertex assignment-distance bound; measures distortion.
pub fn verify_minor(tm: &TerminalMinor, g: &WeightedGraph) -> MinorReport {
    let mut rep = Report::new("terminal-minor");
    let n = g.vertex_count();

    if tm.assign.len() != n {
        rep.violation(format!(
            "branch map covers {} vertices, host has {n}",
            tm.assign.len()
        ));
    }
    for &t in &tm.terminals {
        if tm.assign.get(t as usize).copied() != Some(t) {
            rep.violation(format!("terminal {t} is not its own branch anchor"));
        }
    }
    let term_set: std::collections::BTreeSet<Vertex> = tm.terminals.iter().copied().collect();
    for (v, &t) in tm.assign.iter().enumerate() {
        if !term_set.contains(&t) {
            rep.violation(format!("vertex {v} assigned to non-terminal {t}"));
        }
    }
    for &t in &tm.terminals {
        let branch = tm.branch(t);
        if !is_connected(&Restrict::new(g, &branch)) {
            rep.violation(format!("branch set of terminal {t} is disconnected"));
        }
    }

    // edge rule: exactly the branch-adjacent pairs, weighted by exact
    // host distance
    let mut expected: Vec<(Vertex, Vertex)> = g
        .edges()
        .filter_map(|(u, v, _)| {
            let (a, b) = (tm.assign[u as usize], tm.assign[v as usize]);
            (a != b).then(|| (a.min(b), a.max(b)))
        })
        .collect();
    expected.sort_unstable();
    expected.dedup();
    let got: Vec<(Vertex, Vertex)> = tm.edges.iter().map(|&(a, b, _)| (a, b)).collect();
    if expected != got {
        rep.violation(format!(
            "minor edge set mismatch: expected {} edges, found {}",
            expected.len(),
            got.len()
        ));
    }

    let by_terminal: BTreeMap<Vertex, crate::graph::ShortestPaths> = tm
        .terminals
        .par_iter()
        .map(|&t| (t, sssp(g, t).expect("terminal in host")))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    for &(a, b, w) in &tm.edges {
        let exact = by_terminal[&a].dist(b);
        if w != exact {
            rep.violation(format!(
                "minor edge ({a}, {b}) weighted {w}, exact distance is {exact}"
            ));
        }
    }

    // distortion over all terminal pairs
    let minor = tm.minor_graph();
    let mut max_distortion = 0.0f64;
    let mut min_distortion = f64::INFINITY;
    if tm.terminals.len() >= 2 {
        for (i, &t) in tm.terminals.iter().enumerate() {
            let dm = sssp(&minor, i as Vertex).expect("terminal index");
            for (j, &t2) in tm.terminals.iter().enumerate().skip(i + 1) {
                let in_g = by_terminal[&t].dist(t2);
                let in_m = dm.dist(j as Vertex);
                if in_m.is_infinite() {
                    rep.violation(format!("terminals {t} and {t2} disconnected in the minor"));
                    continue;
                }
                let ratio = in_m / in_g;
                if in_m < in_g {
                    rep.violation(format!(
                        "contraction: d_M({t}, {t2}) = {in_m} below d_G = {in_g}"
                    ));
                }
                max_distortion = max_distortion.max(ratio);
                min_distortion = min_distortion.min(ratio);
            }
        }
    } else {
        max_distortion = 1.0;
        min_distortion = 1.0;
    }

    // per-vertex bound from the recorded levels
    let zeta = tm.params.zeta;
    let max_level = tm.trace.iter().map(|t| t.max_level).max().unwrap_or(0);
    let tau_hat = ((max_level as f64 / zeta).ceil()).max(1.0);
    let bound = 3.0 * tau_hat * zeta * zeta;
    let dist_k = multi_source_sssp(g, &tm.terminals).expect("terminals in host");
    let mut max_vertex_ratio = 0.0f64;
    for v in 0..n as Vertex {
        let dk = dist_k.dist(v);
        if dk == 0.0 {
            continue;
        }
        let df = by_terminal[&tm.assign[v as usize]].dist(v);
        let ratio = df / dk;
        max_vertex_ratio = max_vertex_ratio.max(ratio);
        if ratio > bound {
            rep.violation(format!(
                "vertex {v}: assigned-terminal distance ratio {ratio} exceeds 3*tau_hat*zeta^2 = {bound}"
            ));
        }
    }

    MinorReport {
        report: rep,
        max_distortion,
        min_distortion,
        max_vertex_ratio,
        tau_hat,
        vertex_ratio_bound: bound,
    }
}

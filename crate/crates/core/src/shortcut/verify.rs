//! Exact partition checks plus the sampled low-hop audit.
//!
//! `verify_partition` re-derives every structural invariant of a
//! clustering (partition, connectivity, containment in one supernode,
//! strong diameter at most `4 * delta`) by per-cluster all-pairs search.
//! `verify_shortcut` samples vertex pairs, walks their deterministic
//! shortest paths, and audits the cluster-hop cost: short paths must
//! have finite cost below the configured ceiling, paths shorter than
//! `delta` touch at most `9r` clusters per enclosing domain, and every
//! sampled cost must be consistent with the per-chunk ceiling.

use super::{cluster_graph, path_cost, ClusterGraph, ClusterId, Clustering};
use crate::copdecomp::{CopDecomposition, SupernodeId};
use crate::graph::{sssp, Restrict, Topology, Vertex};
use crate::report::Report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Which vertex pairs the shortcut audit walks. `Random` mixes uniform
/// pairs with short random-walk pairs so that paths below `delta / r`
/// actually show up in the sample.
#[derive(Debug, Clone, Copy)]
pub enum PairSample {
    All,
    Random { seed: u64, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub u: Vertex,
    pub v: Vertex,
    pub dist: f64,
    /// Cluster hops; `None` when no restricted cluster path exists.
    pub cost: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct ShortcutReport {
    pub report: Report,
    /// Largest cost among sampled paths shorter than `delta / r` (the
    /// measured per-chunk hop constant).
    pub short_path_max_cost: Option<u32>,
    /// Largest observed `cost / ceil(dist / (4 delta))`: the measured
    /// per-diameter-unit hop constant.
    pub max_cost_per_unit: f64,
    pub ceiling: f64,
    pub records: Vec<PairRecord>,
}

impl ShortcutReport {
    pub fn is_clean(&self) -> bool {
        self.report.is_clean()
    }

    /// CSV rows `u,v,dist,cost` (cost empty when disconnected).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,dist,cost\n");
        for r in &self.records {
            match r.cost {
                Some(c) => {
                    let _ = writeln!(out, "{},{},{},{}", r.u, r.v, r.dist, c);
                }
                None => {
                    let _ = writeln!(out, "{},{},{},", r.u, r.v, r.dist);
                }
            }
        }
        out
    }
}

/// Re-derives the structural invariants of a clustering built from `dec`.
pub fn verify_partition<T: Topology + Sync>(
    g: &T,
    dec: &CopDecomposition,
    c: &Clustering,
) -> Report {
    let mut rep = Report::new("partition");

    for v in g.vertices() {
        match c.owner_of(v) {
            None => rep.violation(format!("vertex {v} not covered by any cluster")),
            Some(cl) => {
                if !c.clusters[cl as usize].contains(v) {
                    rep.violation(format!("vertex {v} missing from cluster {cl} member list"));
                }
            }
        }
    }
    let total: usize = c.clusters.iter().map(|cl| cl.vertices.len()).sum();
    if total != g.vertex_count() {
        rep.violation(format!(
            "cluster sizes sum to {total}, expected {}",
            g.vertex_count()
        ));
    }

    let bound = c.diameter_bound();
    let findings: Vec<String> = c
        .clusters
        .par_iter()
        .flat_map(|cl| {
            let mut out = Vec::new();
            if !cl.contains(cl.center) {
                out.push(format!(
                    "cluster {}: center {} not a member",
                    cl.id, cl.center
                ));
            }
            for &v in &cl.vertices {
                if dec.owner(v) != cl.supernode {
                    out.push(format!(
                        "cluster {}: vertex {v} lies in supernode {}, cluster claims {}",
                        cl.id,
                        dec.owner(v),
                        cl.supernode
                    ));
                }
            }
            let scope = Restrict::new(g, &cl.vertices);
            if !crate::graph::is_connected(&scope) {
                out.push(format!("cluster {} induces a disconnected subgraph", cl.id));
                return out;
            }
            // exact strong diameter by all-pairs inside the cluster
            for &v in &cl.vertices {
                let sp = sssp(&scope, v).expect("member is in scope");
                for &u in &cl.vertices {
                    let d = sp.dist(u);
                    if d > bound {
                        out.push(format!(
                            "cluster {}: strong diameter {d} between {v} and {u} exceeds {bound}",
                            cl.id
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

fn sample_pairs<T: Topology>(g: &T, sample: PairSample) -> Vec<(Vertex, Vertex)> {
    let vs: Vec<Vertex> = g.vertices().collect();
    match sample {
        PairSample::All => {
            let mut out = Vec::new();
            for (i, &u) in vs.iter().enumerate() {
                for &v in &vs[i + 1..] {
                    out.push((u, v));
                }
            }
            out
        }
        PairSample::Random { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count);
            if vs.len() < 2 {
                return out;
            }
            while out.len() < count {
                let u = vs[rng.gen_range(0..vs.len())];
                let v = if out.len() % 2 == 0 {
                    vs[rng.gen_range(0..vs.len())]
                } else {
                    // short random walk from u for a nearby partner
                    let mut cur = u;
                    for _ in 0..rng.gen_range(1..=3) {
                        let nbrs: Vec<Vertex> = g.neighbors(cur).map(|(x, _)| x).collect();
                        if nbrs.is_empty() {
                            break;
                        }
                        cur = nbrs[rng.gen_range(0..nbrs.len())];
                    }
                    cur
                };
                if u != v {
                    out.push((u.min(v), u.max(v)));
                }
            }
            out
        }
    }
}

/// Greedy chunk count: splits the path's edge sequence into maximal
/// pieces of length at most `limit`, treating each cutting edge as a
/// connector between chunks.
fn chunk_count(weights: &[f64], limit: f64) -> u32 {
    let mut chunks = 1u32;
    let mut acc = 0.0;
    for &w in weights {
        if acc + w <= limit {
            acc += w;
        } else {
            chunks += 1;
            acc = 0.0;
        }
    }
    chunks
}

/// Supernodes whose domain contains every vertex of the sampled path:
/// the common ancestors-or-self of all owner supernodes, root first.
fn enclosing_chain(dec: &CopDecomposition, owners: &[SupernodeId]) -> Vec<SupernodeId> {
    let chain_of = |s: SupernodeId| -> Vec<SupernodeId> {
        let mut ch = dec.ancestors(s);
        ch.reverse();
        ch.push(s);
        ch
    };
    let mut common = chain_of(owners[0]);
    for &s in &owners[1..] {
        let other = chain_of(s);
        let keep = common
            .iter()
            .zip(other.iter())
            .take_while(|(a, b)| a == b)
            .count();
        common.truncate(keep);
    }
    common
}

/// Samples pairs and audits the low-hop guarantees; findings land in the
/// report, per-pair measurements in `records`.
pub fn verify_shortcut<T: Topology + Sync>(
    g: &T,
    dec: &CopDecomposition,
    c: &Clustering,
    sample: PairSample,
    cost_ceiling: Option<f64>,
) -> ShortcutReport {
    let ceiling = cost_ceiling.unwrap_or(54.0 * dec.r as f64);
    let gg = cluster_graph(g, c);
    let delta = dec.delta;
    let short_limit = dec.buffer_width();

    let mut by_source: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for (u, v) in sample_pairs(g, sample) {
        by_source.entry(u).or_default().push(v);
    }
    let sources: Vec<(Vertex, Vec<Vertex>)> = by_source.into_iter().collect();

    struct PerPair {
        record: PairRecord,
        chunks: u32,
        findings: Vec<String>,
    }

    let evaluated: Vec<Vec<PerPair>> = sources
        .par_iter()
        .map(|(u, targets)| {
            let sp = sssp(g, *u).expect("source is in the graph");
            let mut out = Vec::with_capacity(targets.len());
            for &v in targets {
                let mut findings = Vec::new();
                let Some(path) = sp.path_to(g, v) else {
                    findings.push(format!("pair ({u}, {v}) is disconnected in the host graph"));
                    out.push(PerPair {
                        record: PairRecord {
                            u: *u,
                            v,
                            dist: f64::INFINITY,
                            cost: None,
                        },
                        chunks: 1,
                        findings,
                    });
                    continue;
                };
                let dist = path.length();
                let cost = path_cost(c, &gg, &path)
                    .expect("sampled path vertices are clustered")
                    .hops();
                if cost.is_none() {
                    findings.push(format!(
                        "pair ({u}, {v}): no cluster path restricted to the shortest path"
                    ));
                }
                if dist < short_limit {
                    match cost {
                        None => findings.push(format!(
                            "short pair ({u}, {v}) with dist {dist} has disconnected cost"
                        )),
                        Some(h) if (h as f64) > ceiling => findings.push(format!(
                            "short pair ({u}, {v}): cost {h} exceeds ceiling {ceiling}"
                        )),
                        _ => {}
                    }
                }
                if dist < delta {
                    let owners: Vec<SupernodeId> =
                        path.vertices().iter().map(|&x| dec.owner(x)).collect();
                    let mut uniq = owners.clone();
                    uniq.sort_unstable();
                    uniq.dedup();
                    for enc in enclosing_chain(dec, &uniq) {
                        let mut touched: Vec<ClusterId> = path
                            .vertices()
                            .iter()
                            .filter(|&&x| dec.owner(x) == enc)
                            .map(|&x| c.owner_of(x).expect("clustered"))
                            .collect();
                        touched.sort_unstable();
                        touched.dedup();
                        if touched.len() > 9 * dec.r as usize {
                            findings.push(format!(
                                "pair ({u}, {v}): path of length {dist} touches {} clusters of supernode {enc}, limit 9r = {}",
                                touched.len(),
                                9 * dec.r
                            ));
                        }
                    }
                }
                let weights: Vec<f64> = path
                    .vertices()
                    .windows(2)
                    .map(|e| {
                        g.neighbors(e[0])
                            .find(|&(x, _)| x == e[1])
                            .map(|(_, w)| w)
                            .expect("path edge exists")
                    })
                    .collect();
                out.push(PerPair {
                    record: PairRecord {
                        u: *u,
                        v,
                        dist,
                        cost,
                    },
                    chunks: chunk_count(&weights, short_limit),
                    findings,
                });
            }
            out
        })
        .collect();

    let mut rep = Report::new("shortcut");
    let mut records = Vec::new();
    let mut short_max: Option<u32> = None;
    let mut per_unit = 0.0f64;
    let mut chunk_findings = Vec::new();
    for per_source in evaluated {
        for pp in per_source {
            rep.violations.extend(pp.findings);
            if pp.record.dist < short_limit {
                if let Some(h) = pp.record.cost {
                    short_max = Some(short_max.map_or(h, |m| m.max(h)));
                }
            }
            if let Some(h) = pp.record.cost {
                // consistency with the per-chunk ceiling on the whole path
                let bound = pp.chunks as f64 * (ceiling + 1.0) - 1.0;
                if (h as f64) > bound {
                    chunk_findings.push(format!(
                        "pair ({}, {}): cost {h} exceeds {} chunks x (ceiling {ceiling} + 1) - 1",
                        pp.record.u, pp.record.v, pp.chunks
                    ));
                }
                if pp.record.dist > 0.0 {
                    let units = (pp.record.dist / (4.0 * delta)).ceil().max(1.0);
                    per_unit = per_unit.max(h as f64 / units);
                }
            }
            records.push(pp.record);
        }
    }
    rep.violations.extend(chunk_findings);
    if short_max.is_none() {
        rep.warn(format!(
            "no sampled pair closer than delta/r = {short_limit}; short-path checks were vacuous"
        ));
    }

    ShortcutReport {
        report: rep,
        short_path_max_cost: short_max,
        max_cost_per_unit: per_unit,
        ceiling,
        records,
    }
}

/// Brute-force reference for [`path_cost`]: enumerates every simple
/// cluster sequence inside `allowed` and returns the minimum hop count.
/// Exponential; intended for cross-checking on instances with at most a
/// dozen clusters.
pub fn exhaustive_oracle_hops(
    gg: &ClusterGraph,
    from: ClusterId,
    to: ClusterId,
    allowed: &[ClusterId],
) -> Option<u32> {
    fn dfs(
        gg: &ClusterGraph,
        cur: ClusterId,
        to: ClusterId,
        ok: &[bool],
        visited: &mut Vec<ClusterId>,
        best: &mut Option<u32>,
    ) {
        if cur == to {
            let hops = (visited.len() - 1) as u32;
            *best = Some(best.map_or(hops, |b| b.min(hops)));
            return;
        }
        if let Some(b) = *best {
            if visited.len() as u32 > b {
                return;
            }
        }
        for &nb in gg.neighbors(cur) {
            if ok[nb as usize] && !visited.contains(&nb) {
                visited.push(nb);
                dfs(gg, nb, to, ok, visited, best);
                visited.pop();
            }
        }
    }
    let mut ok = vec![false; gg.node_count()];
    for &c in allowed {
        ok[c as usize] = true;
    }
    if !ok[from as usize] || !ok[to as usize] {
        return None;
    }
    let mut best = None;
    let mut visited = vec![from];
    dfs(gg, from, to, &ok, &mut visited, &mut best);
    best
}

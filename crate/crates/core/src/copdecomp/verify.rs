//! Exact verifiers for every guarantee of a buffered cop decomposition:
//! radius, skeleton shape, buffer width, and the tree-decomposition
//! property of the bag expansion. Violations are report entries, never
//! panics; an equality hit on the strict buffer bound is recorded as a
//! warning because the construction only guarantees it under nonzero
//! edge weights.

use super::{CopDecomposition, SupernodeId};
use crate::graph::{multi_source_sssp, sssp, Restrict, Topology};
use crate::report::Report;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Structural sanity: assignment totality, supernode connectivity,
/// partition-tree rootedness. The builder enforces all of this, so the
/// checks guard deserialized or hand-built decompositions.
pub fn verify_structure<T: Topology + Sync>(dec: &CopDecomposition, g: &T) -> Report {
    let mut rep = Report::new("structure");
    let mut counts = vec![0usize; dec.supernode_count()];
    for v in g.vertices() {
        let s = dec.assignment[v as usize];
        if s == SupernodeId::MAX || s as usize >= dec.supernode_count() {
            rep.violation(format!("vertex {v} has no owning supernode"));
            continue;
        }
        counts[s as usize] += 1;
        if !dec.supernodes[s as usize].contains(v) {
            rep.violation(format!("vertex {v} missing from supernode {s} vertex list"));
        }
    }
    for s in &dec.supernodes {
        if counts[s.id as usize] != s.vertices.len() {
            rep.violation(format!(
                "supernode {} vertex list does not match assignment",
                s.id
            ));
        }
        if !crate::graph::is_connected(&Restrict::new(g, &s.vertices)) {
            rep.violation(format!(
                "supernode {} induces a disconnected subgraph",
                s.id
            ));
        }
        for &v in s.skeleton.members() {
            if !s.contains(v) {
                rep.violation(format!(
                    "skeleton vertex {v} of supernode {} is outside the supernode",
                    s.id
                ));
            }
        }
    }
    let roots = dec.supernodes.iter().filter(|s| s.parent.is_none()).count();
    if roots != 1 {
        rep.violation(format!("partition tree has {roots} roots, expected 1"));
    }
    rep
}

/// Every supernode vertex lies within `delta` of the skeleton, measured
/// inside the supernode's own induced subgraph.
pub fn verify_radius<T: Topology + Sync>(dec: &CopDecomposition, g: &T) -> Report {
    let mut rep = Report::new("radius");
    let findings: Vec<String> = dec
        .supernodes
        .par_iter()
        .flat_map(|s| {
            let scope = Restrict::new(g, &s.vertices);
            let paths =
                multi_source_sssp(&scope, s.skeleton.members()).expect("skeleton is non-empty");
            let mut out = Vec::new();
            for &v in &s.vertices {
                let d = paths.dist(v);
                if d > dec.delta {
                    out.push(format!(
                        "supernode {}: vertex {v} at distance {d} from skeleton, limit {}",
                        s.id, dec.delta
                    ));
                }
            }
            out
        })
        .collect();
    rep.violations = findings;
    rep.violations.sort();
    rep
}

/// Skeletons are SSSP trees of their domains (root-to-vertex distance
/// along the skeleton equals the domain distance) with at most `r - 2`
/// leaves.
pub fn verify_skeleton<T: Topology + Sync>(dec: &CopDecomposition, g: &T) -> Report {
    let mut rep = Report::new("skeleton");
    let findings: Vec<String> = dec
        .supernodes
        .par_iter()
        .flat_map(|s| {
            let mut out = Vec::new();
            let skel = &s.skeleton;
            if skel.links.len() + 1 != skel.members().len() {
                out.push(format!(
                    "supernode {}: skeleton has {} vertices but {} links",
                    s.id,
                    skel.members().len(),
                    skel.links.len()
                ));
                return out;
            }
            let limit = (dec.r - 2) as usize;
            if skel.leaf_count() > limit {
                out.push(format!(
                    "supernode {}: skeleton has {} leaves, limit {limit}",
                    s.id,
                    skel.leaf_count()
                ));
            }
            let dom = dec.dom_vertices(s.id).expect("supernode id is valid");
            let scope = Restrict::new(g, &dom);
            let sp = sssp(&scope, skel.root()).expect("root is in its domain");
            for &v in skel.members() {
                // walk the skeleton path back to the root, summing weights
                let mut along = 0.0;
                let mut cur = v;
                while let Some(p) = skel.parent_of(cur) {
                    match g.neighbors(cur).find(|&(u, _)| u == p) {
                        Some((_, w)) => along += w,
                        None => {
                            out.push(format!(
                                "supernode {}: skeleton link ({cur}, {p}) is not a graph edge",
                                s.id
                            ));
                            return out;
                        }
                    }
                    cur = p;
                }
                if cur != skel.root() {
                    out.push(format!(
                        "supernode {}: skeleton vertex {v} does not reach the root",
                        s.id
                    ));
                } else if along != sp.dist(v) {
                    out.push(format!(
                        "supernode {}: skeleton path to {v} has length {along}, domain distance {}",
                        s.id,
                        sp.dist(v)
                    ));
                }
            }
            out
        })
        .collect();
    rep.violations = findings;
    rep.violations.sort();
    rep
}

/// For every supernode and every non-adjacent strict ancestor `X`: every
/// vertex of the supernode's domain sits strictly farther than
/// `delta / r` from `X`, measured inside `dom(X)`. Exact equality is a
/// warning, not a violation.
pub fn verify_buffer<T: Topology + Sync>(dec: &CopDecomposition, g: &T) -> Report {
    let mut rep = Report::new("buffer");
    let width = dec.buffer_width();
    let ids: Vec<SupernodeId> = (0..dec.supernode_count() as SupernodeId).collect();
    let findings: Vec<(Vec<String>, Vec<String>)> = ids
        .par_iter()
        .map(|&x| {
            let mut violations = Vec::new();
            let mut warnings = Vec::new();
            let descendants: Vec<SupernodeId> = dec
                .subtree(x)
                .into_iter()
                .filter(|&d| d != x && !dec.are_adjacent(x, d))
                .collect();
            if descendants.is_empty() {
                return (violations, warnings);
            }
            let dom_x = dec.dom_vertices(x).expect("valid id");
            let scope = Restrict::new(g, &dom_x);
            let sources = &dec.supernodes[x as usize].vertices;
            let paths = multi_source_sssp(&scope, sources).expect("supernode non-empty");
            for d in descendants {
                for v in dec.dom_vertices(d).expect("valid id") {
                    let dist = paths.dist(v);
                    if dist < width {
                        violations.push(format!(
                            "supernode {d} cut off from ancestor {x}: vertex {v} at distance {dist} <= {width}"
                        ));
                    } else if dist == width {
                        warnings.push(format!(
                            "supernode {d} vs ancestor {x}: vertex {v} exactly at buffer width {width}"
                        ));
                    }
                }
            }
            (violations, warnings)
        })
        .collect();
    for (v, w) in findings {
        rep.violations.extend(v);
        rep.warnings.extend(w);
    }
    rep.violations.sort();
    rep.warnings.sort();
    rep
}

/// The bag expansion is a tree decomposition of `g` with bags of at most
/// `r - 1` supernodes; also checks the edge-implies-ancestry fact the
/// construction guarantees.
pub fn verify_tree_decomposition<T: Topology + Sync>(dec: &CopDecomposition, g: &T) -> Report {
    let mut rep = Report::new("tree-decomposition");
    let bags = dec.expansion_bags();

    for (id, bag) in bags.bags().iter().enumerate() {
        if bag.len() > (dec.r - 1) as usize {
            rep.violation(format!(
                "bag {id} holds {} supernodes, limit r-1 = {}",
                bag.len(),
                dec.r - 1
            ));
        }
    }

    // (a) every edge is covered by some bag; with bags defined as
    // "supernode + adjacent ancestors" this means the lower endpoint's
    // bag must contain the upper one. (d) endpoints are ancestor-related.
    for v in g.vertices() {
        for (u, _) in g.neighbors(v) {
            if u <= v {
                continue;
            }
            let (a, b) = (dec.owner(v), dec.owner(u));
            if a == b {
                continue;
            }
            let (anc, desc) = if dec.is_strict_ancestor(a, b) {
                (a, b)
            } else if dec.is_strict_ancestor(b, a) {
                (b, a)
            } else {
                rep.violation(format!(
                    "edge ({v}, {u}): supernodes {a} and {b} are not ancestor-related"
                ));
                continue;
            };
            if !bags.bag(desc).contains(&anc) {
                rep.violation(format!(
                    "edge ({v}, {u}): no bag contains both supernodes {a} and {b}"
                ));
            }
        }
    }

    // (b) bags containing a fixed supernode form a connected subtree of
    // the expansion (which mirrors the partition tree).
    let mut holding: BTreeMap<SupernodeId, Vec<SupernodeId>> = BTreeMap::new();
    for (id, bag) in bags.bags().iter().enumerate() {
        for &s in bag {
            holding.entry(s).or_default().push(id as SupernodeId);
        }
    }
    for (s, holders) in holding {
        // connectivity in the partition tree restricted to holder bags
        let mut reached = vec![false; dec.supernode_count()];
        let in_holders: Vec<bool> = {
            let mut m = vec![false; dec.supernode_count()];
            for &h in &holders {
                m[h as usize] = true;
            }
            m
        };
        let start = holders[0];
        let mut stack = vec![start];
        reached[start as usize] = true;
        while let Some(cur) = stack.pop() {
            let mut step = |next: SupernodeId| {
                if in_holders[next as usize] && !reached[next as usize] {
                    reached[next as usize] = true;
                    stack.push(next);
                }
            };
            if let Some(p) = dec.supernodes[cur as usize].parent {
                step(p);
            }
            for c in dec.children(cur) {
                step(c);
            }
        }
        for &h in &holders {
            if !reached[h as usize] {
                rep.violation(format!(
                    "bags containing supernode {s} do not form a connected subtree (bag {h} detached)"
                ));
            }
        }
    }

    // (c) every vertex appears in some bag: bag(owner(v)) contains it by
    // construction; re-check ownership totality instead.
    for v in g.vertices() {
        if dec.assignment[v as usize] == SupernodeId::MAX {
            rep.violation(format!("vertex {v} not covered by any bag"));
        }
    }
    rep
}

/// Runs all decomposition verifiers and folds the findings.
pub fn verify_all<T: Topology + Sync>(dec: &CopDecomposition, g: &T) -> Report {
    let mut rep = Report::new("cop-decomposition");
    rep.absorb(verify_structure(dec, g));
    rep.absorb(verify_radius(dec, g));
    rep.absorb(verify_skeleton(dec, g));
    rep.absorb(verify_buffer(dec, g));
    rep.absorb(verify_tree_decomposition(dec, g));
    rep
}

/// Telemetry for reporting: supernode count, max bag size, skeleton
/// sizes. Not a correctness gate.
pub fn stats(dec: &CopDecomposition) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    m.insert("supernodes".into(), dec.supernode_count() as f64);
    m.insert(
        "max_bag_size".into(),
        dec.expansion_bags().max_bag_size() as f64,
    );
    m.insert(
        "max_skeleton_leaves".into(),
        dec.supernodes
            .iter()
            .map(|s| s.skeleton.leaf_count())
            .max()
            .unwrap_or(0) as f64,
    );
    m.insert(
        "max_depth".into(),
        dec.supernodes.iter().map(|s| s.depth).max().unwrap_or(0) as f64,
    );
    m
}

//! The construction: recursive supernode creation plus buffer growth.
//!
//! `build_tree` carves a new supernode out of a connected subgraph `H` of
//! unassigned vertices, `grow_buffer` re-assigns vertices that came too
//! close to a supernode that just got cut off, and both recurse on the
//! remaining components. Two runtime invariants are asserted on every
//! call and a third (per-assignment supernode connectivity) can be
//! switched on through [`BuildOptions`]; a violation is an implementation
//! bug, never a data condition, so they panic.

use super::{CopDecomposition, DecompositionError, Skeleton, Supernode, SupernodeId};
use crate::graph::{
    connected_components, is_connected, multi_source_sssp, sssp, Restrict, Topology, Vertex,
};
use std::collections::{BTreeMap, VecDeque};

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Re-check that every supernode induces a connected subgraph after
    /// every single vertex assignment (quadratic; meant for test runs).
    pub connectivity_check_per_assignment: bool,
}

/// Builds a buffered cop decomposition of a connected (sub)graph with
/// radius `delta` and excluded-clique parameter `r`.
///
/// ```
/// use copse_core::{build_decomposition, graph};
///
/// let g = graph::grid(4, 4, graph::WeightRule::Unit);
/// let dec = build_decomposition(&g, 5, 2.0).unwrap();
/// assert!(dec.supernode_count() >= 2);
/// assert!(copse_core::copdecomp::verify::verify_all(&dec, &g).is_clean());
/// ```
pub fn build_decomposition<T: Topology>(
    g: &T,
    r: u32,
    delta: f64,
) -> Result<CopDecomposition, DecompositionError> {
    build_decomposition_with(g, r, delta, BuildOptions::default())
}

pub fn build_decomposition_with<T: Topology>(
    g: &T,
    r: u32,
    delta: f64,
    opts: BuildOptions,
) -> Result<CopDecomposition, DecompositionError> {
    if r < 3 {
        return Err(DecompositionError::WidthTooSmall(r));
    }
    if !delta.is_finite() || delta <= 0.0 {
        return Err(DecompositionError::NonPositiveRadius(delta));
    }
    if g.vertex_count() == 0 || !is_connected(g) {
        return Err(DecompositionError::Disconnected);
    }

    let mut builder = Builder {
        g,
        r,
        buffer_radius: delta / r as f64,
        opts,
        assignment: vec![None; g.id_space()],
        nodes: Vec::new(),
    };
    let all: Vec<Vertex> = g.vertices().collect();
    builder.build_tree(all, None);
    Ok(builder.freeze(r, delta))
}

struct NodeBuild {
    vertices: Vec<Vertex>,
    skeleton: Skeleton,
    init_domain: Vec<Vertex>,
    parent: Option<SupernodeId>,
    depth: u32,
}

struct Builder<'a, T: Topology> {
    g: &'a T,
    r: u32,
    buffer_radius: f64,
    opts: BuildOptions,
    assignment: Vec<Option<SupernodeId>>,
    nodes: Vec<NodeBuild>,
}

impl<'a, T: Topology> Builder<'a, T> {
    /// Supernodes seen by `h`: assigned, disjoint from `h`, with a vertex
    /// adjacent to `h`. Maps each to its witness, the smallest-id vertex
    /// of `h` adjacent to it. Also asserts the call invariant: everything
    /// in `h` unassigned, everything adjacent to `h` assigned.
    fn seen_with_witnesses(&self, h: &[Vertex]) -> BTreeMap<SupernodeId, Vertex> {
        let in_h = self.membership(h);
        let mut seen = BTreeMap::new();
        for &v in h {
            assert!(
                self.assignment[v as usize].is_none(),
                "call invariant violated: vertex {v} of H is already assigned"
            );
            for (u, _) in self.g.neighbors(v) {
                if in_h[u as usize] {
                    continue;
                }
                let s = self.assignment[u as usize].unwrap_or_else(|| {
                    panic!("call invariant violated: vertex {u} adjacent to H is unassigned")
                });
                seen.entry(s).or_insert(v);
            }
        }
        seen
    }

    fn membership(&self, vs: &[Vertex]) -> Vec<bool> {
        let mut in_set = vec![false; self.g.id_space()];
        for &v in vs {
            in_set[v as usize] = true;
        }
        in_set
    }

    fn strict_ancestors(&self, x: SupernodeId) -> Vec<SupernodeId> {
        let mut out = Vec::new();
        let mut cur = self.nodes[x as usize].parent;
        while let Some(p) = cur {
            out.push(p);
            cur = self.nodes[p as usize].parent;
        }
        out
    }

    /// Current domain of `x`: its initialization subgraph minus vertices
    /// assigned so far to supernodes strictly above `x`.
    fn domain_now(&self, x: SupernodeId) -> Vec<Vertex> {
        let ancestors = self.strict_ancestors(x);
        self.nodes[x as usize]
            .init_domain
            .iter()
            .copied()
            .filter(|&v| match self.assignment[v as usize] {
                None => true,
                Some(s) => !ancestors.contains(&s),
            })
            .collect()
    }

    fn assign(&mut self, v: Vertex, s: SupernodeId) {
        debug_assert!(self.assignment[v as usize].is_none());
        self.assignment[v as usize] = Some(s);
        self.nodes[s as usize].vertices.push(v);
        if self.opts.connectivity_check_per_assignment {
            let members = &self.nodes[s as usize].vertices;
            assert!(
                is_connected(&Restrict::new(self.g, members)),
                "connectivity invariant violated: supernode {s} disconnected after assigning {v}"
            );
        }
    }

    fn unassigned_of(&self, h: &[Vertex]) -> Vec<Vertex> {
        h.iter()
            .copied()
            .filter(|&v| self.assignment[v as usize].is_none())
            .collect()
    }

    /// Components of the subgraph induced on `vs`, in order of smallest
    /// contained vertex id (the order `connected_components` yields).
    fn components(&self, vs: &[Vertex]) -> Vec<Vec<Vertex>> {
        connected_components(&Restrict::new(self.g, vs))
    }

    fn build_tree(&mut self, h: Vec<Vertex>, parent: Option<SupernodeId>) -> SupernodeId {
        let seen = self.seen_with_witnesses(&h);
        assert!(
            seen.len() <= (self.r - 2) as usize,
            "width invariant violated: H sees {} supernodes, limit is r-2 = {}",
            seen.len(),
            self.r - 2
        );

        // Root the skeleton at the smallest-id vertex of H and connect it
        // to the witness of every seen supernode by shortest paths in H.
        let root = h[0];
        let skeleton = if seen.is_empty() {
            Skeleton::single(root)
        } else {
            let sp = sssp(&Restrict::new(self.g, &h), root).expect("root is in H");
            let mut members = vec![root];
            let mut links = Vec::new();
            let mut marked = self.membership(&[root]);
            for (&_s, &witness) in &seen {
                let mut cur = witness;
                while !marked[cur as usize] {
                    marked[cur as usize] = true;
                    members.push(cur);
                    let p = sp
                        .parent(cur)
                        .unwrap_or_else(|| panic!("witness {witness} unreachable inside H"));
                    links.push((cur, p));
                    cur = p;
                }
            }
            Skeleton::new(root, members, links)
        };

        let id = self.nodes.len() as SupernodeId;
        let depth = parent.map_or(0, |p| self.nodes[p as usize].depth + 1);
        let skel_members: Vec<Vertex> = skeleton.members().to_vec();
        self.nodes.push(NodeBuild {
            vertices: skel_members.clone(),
            skeleton,
            init_domain: h.clone(),
            parent,
            depth,
        });
        for &v in &skel_members {
            debug_assert!(self.assignment[v as usize].is_none());
            self.assignment[v as usize] = Some(id);
        }
        if self.opts.connectivity_check_per_assignment {
            assert!(
                is_connected(&Restrict::new(self.g, &skel_members)),
                "connectivity invariant violated: skeleton of supernode {id} is disconnected"
            );
        }

        // Grow buffers for supernodes this carve-out cut off. Component
        // lists and cut-off lists are snapshotted before any buffer work
        // so sibling calls stay independent.
        let remaining = self.unassigned_of(&h);
        let pending: Vec<(Vec<Vertex>, VecDeque<SupernodeId>)> = self
            .components(&remaining)
            .into_iter()
            .map(|comp| {
                let seen_by_comp = self.seen_with_witnesses(&comp);
                let cut_off: VecDeque<SupernodeId> = seen
                    .keys()
                    .copied()
                    .filter(|s| !seen_by_comp.contains_key(s))
                    .collect();
                (comp, cut_off)
            })
            .collect();
        for (comp, cut_off) in pending {
            self.grow_buffer(cut_off, comp);
        }

        // Recurse on what is still unassigned.
        let rest = self.unassigned_of(&h);
        for comp in self.components(&rest) {
            let child = self.build_tree(comp, Some(id));
            debug_assert_eq!(self.nodes[child as usize].parent, Some(id));
        }
        id
    }

    fn grow_buffer(&mut self, mut cut_off: VecDeque<SupernodeId>, h: Vec<Vertex>) {
        // Re-assert the call invariant cheaply.
        debug_assert!(h.iter().all(|&v| self.assignment[v as usize].is_none()));
        let Some(x) = cut_off.pop_front() else {
            return;
        };

        let domain_x = self.domain_now(x);
        let in_dom = self.membership(&domain_x);
        let in_h = self.membership(&h);

        // Boundary: assigned vertices outside H, adjacent to H, inside
        // the current domain of X.
        let mut boundary: Vec<Vertex> = Vec::new();
        for &v in &h {
            for (u, _) in self.g.neighbors(v) {
                if !in_h[u as usize] && in_dom[u as usize] {
                    boundary.push(u);
                }
            }
        }
        boundary.sort_unstable();
        boundary.dedup();

        if !boundary.is_empty() {
            for &b in &boundary {
                let owner = self.assignment[b as usize].unwrap_or_else(|| {
                    panic!("call invariant violated: boundary vertex {b} unassigned")
                });
                assert!(
                    owner != x,
                    "cut-off invariant violated: boundary vertex {b} belongs to processed supernode {x}"
                );
            }
            let scope = Restrict::new(self.g, &domain_x);
            let paths = multi_source_sssp(&scope, &boundary).expect("boundary is non-empty");
            let mut batch: Vec<(f64, Vertex)> = h
                .iter()
                .copied()
                .filter(|&v| paths.dist(v) <= self.buffer_radius)
                .map(|v| (paths.dist(v), v))
                .collect();
            // Nearest-first keeps every supernode connected after each
            // single assignment: a vertex's path to its boundary vertex is
            // settled before the vertex itself.
            batch.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (_, v) in batch {
                let nearest = paths.nearest(v).expect("buffer vertex has a boundary");
                let target = self.assignment[nearest as usize].expect("boundary is assigned");
                self.assign(v, target);
            }
        }

        // Buffer growth may cut off more supernodes and split H; collect
        // the follow-up work before recursing. "Seen by H" is evaluated
        // against the full input subgraph, so supernodes that just grew
        // into H are excluded by disjointness.
        let remaining = self.unassigned_of(&h);
        let seen_by_h = self.seen_set(&h);
        let pending: Vec<(Vec<Vertex>, VecDeque<SupernodeId>)> = self
            .components(&remaining)
            .into_iter()
            .map(|comp| {
                let seen_by_comp = self.seen_with_witnesses(&comp);
                let mut list = cut_off.clone();
                list.extend(
                    seen_by_h
                        .iter()
                        .copied()
                        .filter(|s| !seen_by_comp.contains_key(s)),
                );
                (comp, list)
            })
            .collect();
        for (comp, list) in pending {
            self.grow_buffer(list, comp);
        }
    }

    /// Supernodes disjoint from `vs` owning a vertex adjacent to `vs`.
    /// Tolerates assigned vertices inside `vs` (unlike
    /// `seen_with_witnesses`, which asserts the call invariant).
    fn seen_set(&self, vs: &[Vertex]) -> Vec<SupernodeId> {
        let in_set = self.membership(vs);
        let mut intersecting: Vec<SupernodeId> = vs
            .iter()
            .filter_map(|&v| self.assignment[v as usize])
            .collect();
        intersecting.sort_unstable();
        intersecting.dedup();
        let mut out = Vec::new();
        for &v in vs {
            for (u, _) in self.g.neighbors(v) {
                if in_set[u as usize] {
                    continue;
                }
                let s = self.assignment[u as usize].unwrap_or_else(|| {
                    panic!("call invariant violated: vertex {u} adjacent to H is unassigned")
                });
                if intersecting.binary_search(&s).is_err() {
                    out.push(s);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn freeze(self, r: u32, delta: f64) -> CopDecomposition {
        // Slots outside the (sub)graph stay at `SupernodeId::MAX`.
        let mut dense = vec![SupernodeId::MAX; self.g.id_space()];
        for v in self.g.vertices() {
            dense[v as usize] = self.assignment[v as usize]
                .unwrap_or_else(|| panic!("totality invariant violated: vertex {v} unassigned"));
        }

        let supernodes: Vec<Supernode> = self
            .nodes
            .into_iter()
            .enumerate()
            .map(|(id, n)| {
                let mut vertices = n.vertices;
                vertices.sort_unstable();
                Supernode {
                    id: id as SupernodeId,
                    vertices,
                    skeleton: n.skeleton,
                    init_domain: n.init_domain,
                    parent: n.parent,
                    depth: n.depth,
                }
            })
            .collect();

        let mut adjacency: Vec<Vec<SupernodeId>> = vec![Vec::new(); supernodes.len()];
        for v in self.g.vertices() {
            for (u, _) in self.g.neighbors(v) {
                if u <= v {
                    continue;
                }
                let (a, b) = (dense[v as usize], dense[u as usize]);
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

        CopDecomposition {
            r,
            delta,
            supernodes,
            assignment: dense,
            supernode_adjacency: adjacency,
        }
    }
}

//! Weighted undirected graphs with dense integer vertex ids, induced
//! subgraph views, and the shortest-path primitives shared by every
//! decomposition and verifier in this crate.
//!
//! All tie-breaking is by smallest vertex id and all distance comparisons
//! are exact comparisons on computed sums, so every operation here is
//! deterministic: equal inputs give bit-identical outputs.

mod generate;
mod io;
mod shortest;

pub use generate::{grid, outerplanar_like, path, random_planar_like, star, tree, WeightRule};
pub use io::{load_edge_list, save_edge_list, to_dot, ParseError};
pub use shortest::{multi_source_sssp, sssp, MultiSourcePaths, ShortestPaths};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex identifier, `0..n`.
pub type Vertex = u32;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(Vertex, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonPositiveWeight(Vertex, Vertex, f64),
    #[error("source vertex {0} is not in the (sub)graph")]
    SourceNotInGraph(Vertex),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAnEdge(Vertex, Vertex),
    #[error("empty source set")]
    EmptySources,
    #[error("graph is disconnected: infinite diameter")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
}

/// Read-only view of a vertex set with weighted symmetric adjacency.
///
/// Implemented by [`WeightedGraph`] and [`SubgraphView`]; every traversal
/// in this crate is generic over it. Vertex ids always refer to the
/// underlying graph's id space, so a view reuses its parent's ids.
pub trait Topology {
    /// Size of the vertex id space (ids are `< id_space()`).
    fn id_space(&self) -> usize;
    fn contains(&self, v: Vertex) -> bool;
    fn vertex_count(&self) -> usize;
    /// Member vertices in ascending id order.
    fn vertices(&self) -> impl Iterator<Item = Vertex> + '_;
    /// Neighbors of `v` inside the view, ascending id order.
    fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, f64)> + '_;
}

/// Undirected graph with strictly positive edge weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    adj: Vec<Vec<(Vertex, f64)>>,
    edge_count: usize,
}

impl WeightedGraph {
    /// Builds a graph on `n` vertices from an edge list. Rejects
    /// self-loops, duplicate edges, out-of-range endpoints, and weights
    /// that are not strictly positive.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex, f64)>,
    ) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<(Vertex, f64)>> = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v, w) in edges {
            if u as usize >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v as usize >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(GraphError::NonPositiveWeight(u, v, w));
            }
            if adj[u as usize].iter().any(|&(x, _)| x == v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[u as usize].push((v, w));
            adj[v as usize].push((u, w));
            edge_count += 1;
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        Ok(Self { adj, edge_count })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Edges as `(u, v, w)` with `u < v`, ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| (u as Vertex) < v)
                .map(move |&(v, w)| (u as Vertex, v, w))
        })
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj
            .get(u as usize)
            .is_some_and(|l| l.iter().any(|&(x, _)| x == v))
    }

    pub fn edge_weight(&self, u: Vertex, v: Vertex) -> Option<f64> {
        self.adj
            .get(u as usize)?
            .iter()
            .find(|&&(x, _)| x == v)
            .map(|&(_, w)| w)
    }

    /// Smallest edge weight, or `None` for an edgeless graph. Because all
    /// weights are positive this equals the minimum pairwise distance.
    pub fn min_edge_weight(&self) -> Option<f64> {
        self.edges().map(|(_, _, w)| w).fold(None, |acc, w| {
            Some(match acc {
                Some(a) if a <= w => a,
                _ => w,
            })
        })
    }

    /// Copy of the graph keeping only edges with weight `<= cutoff`.
    pub fn filter_edges(&self, cutoff: f64) -> WeightedGraph {
        let edges: Vec<_> = self.edges().filter(|&(_, _, w)| w <= cutoff).collect();
        WeightedGraph::from_edges(self.vertex_count(), edges)
            .expect("filtered edges are valid by construction")
    }

    /// Induced subgraph view on `members` (ids are kept).
    pub fn view<'a>(&'a self, members: &[Vertex]) -> SubgraphView<'a> {
        SubgraphView::new(self, members)
    }

    /// View containing every vertex.
    pub fn full_view(&self) -> SubgraphView<'_> {
        let all: Vec<Vertex> = (0..self.vertex_count() as Vertex).collect();
        SubgraphView::new(self, &all)
    }
}

impl Topology for WeightedGraph {
    fn id_space(&self) -> usize {
        self.adj.len()
    }
    fn contains(&self, v: Vertex) -> bool {
        (v as usize) < self.adj.len()
    }
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }
    fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        0..self.adj.len() as Vertex
    }
    fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.adj[v as usize].iter().copied()
    }
}

/// Induced subgraph: a vertex subset of a parent graph together with every
/// parent edge whose endpoints both lie in the subset.
#[derive(Debug, Clone)]
pub struct SubgraphView<'a> {
    parent: &'a WeightedGraph,
    members: Vec<Vertex>,
    in_set: Vec<bool>,
}

impl<'a> SubgraphView<'a> {
    pub fn new(parent: &'a WeightedGraph, members: &[Vertex]) -> Self {
        let mut sorted: Vec<Vertex> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut in_set = vec![false; parent.vertex_count()];
        for &v in &sorted {
            assert!(
                (v as usize) < parent.vertex_count(),
                "view member {v} out of range"
            );
            in_set[v as usize] = true;
        }
        Self {
            parent,
            members: sorted,
            in_set,
        }
    }

    pub fn parent(&self) -> &'a WeightedGraph {
        self.parent
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }
}

impl Topology for SubgraphView<'_> {
    fn id_space(&self) -> usize {
        self.parent.vertex_count()
    }
    fn contains(&self, v: Vertex) -> bool {
        (v as usize) < self.in_set.len() && self.in_set[v as usize]
    }
    fn vertex_count(&self) -> usize {
        self.members.len()
    }
    fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }
    fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.parent
            .neighbors(v)
            .filter(|&(u, _)| self.in_set[u as usize])
    }
}

/// Restriction of any [`Topology`] to a vertex subset. Unlike
/// [`SubgraphView`] this nests over views without recursion: algorithms
/// that repeatedly carve out sub-subgraphs always restrict the base
/// topology directly.
#[derive(Debug, Clone)]
pub struct Restrict<'a, T: Topology> {
    inner: &'a T,
    members: Vec<Vertex>,
    in_set: Vec<bool>,
}

impl<'a, T: Topology> Restrict<'a, T> {
    pub fn new(inner: &'a T, members: &[Vertex]) -> Self {
        let mut sorted: Vec<Vertex> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut in_set = vec![false; inner.id_space()];
        for &v in &sorted {
            debug_assert!(inner.contains(v), "restriction member {v} not in host");
            in_set[v as usize] = true;
        }
        Self {
            inner,
            members: sorted,
            in_set,
        }
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }
}

impl<T: Topology> Topology for Restrict<'_, T> {
    fn id_space(&self) -> usize {
        self.inner.id_space()
    }
    fn contains(&self, v: Vertex) -> bool {
        (v as usize) < self.in_set.len() && self.in_set[v as usize]
    }
    fn vertex_count(&self) -> usize {
        self.members.len()
    }
    fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }
    fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.inner
            .neighbors(v)
            .filter(|&(u, _)| self.in_set[u as usize])
    }
}

/// A concrete path in a host graph: vertex sequence plus its total length
/// (edge weights summed left to right).
#[derive(Debug, Clone, PartialEq)]
pub struct PathWitness {
    vertices: Vec<Vertex>,
    length: f64,
}

impl PathWitness {
    /// Validates adjacency of consecutive vertices against `host` and sums
    /// the edge weights in path order.
    pub fn new<T: Topology>(host: &T, vertices: Vec<Vertex>) -> Result<Self, GraphError> {
        assert!(!vertices.is_empty(), "a path has at least one vertex");
        let mut length = 0.0;
        for pair in vertices.windows(2) {
            let w = host
                .neighbors(pair[0])
                .find(|&(u, _)| u == pair[1])
                .map(|(_, w)| w)
                .ok_or(GraphError::NotAnEdge(pair[0], pair[1]))?;
            length += w;
        }
        Ok(Self { vertices, length })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }
}

/// Connected components, each sorted ascending, emitted in order of their
/// smallest contained vertex id.
pub fn connected_components<T: Topology>(g: &T) -> Vec<Vec<Vertex>> {
    let mut seen = vec![false; g.id_space()];
    let mut components = Vec::new();
    for start in g.vertices() {
        if seen[start as usize] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen[start as usize] = true;
        while let Some(v) = stack.pop() {
            comp.push(v);
            for (u, _) in g.neighbors(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

pub fn is_connected<T: Topology>(g: &T) -> bool {
    connected_components(g).len() <= 1
}

/// Exact diameter: maximum over all vertex pairs of the shortest-path
/// distance, by running single-source shortest paths from every vertex.
///
/// Errors with [`GraphError::Disconnected`] when any pair is unreachable.
pub fn diameter<T: Topology + Sync>(g: &T) -> Result<f64, GraphError> {
    use rayon::prelude::*;
    if g.vertex_count() == 0 {
        return Err(GraphError::Empty);
    }
    let sources: Vec<Vertex> = g.vertices().collect();
    let per_source: Vec<Result<f64, GraphError>> = sources
        .par_iter()
        .map(|&s| {
            let sp = sssp(g, s)?;
            let mut best = 0.0f64;
            for v in g.vertices() {
                let d = sp.dist(v);
                if d.is_infinite() {
                    return Err(GraphError::Disconnected);
                }
                if d > best {
                    best = d;
                }
            }
            Ok(best)
        })
        .collect();
    let mut best = 0.0f64;
    for r in per_source {
        let d = r?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

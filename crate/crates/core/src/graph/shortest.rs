//! Deterministic Dijkstra: single-source and multi-source variants.
//!
//! Multi-source labels are minimized lexicographically by
//! `(distance, source id)`, so the "nearest source" of a vertex is unique.
//! Parent links are recomputed in a final pass as the smallest-id neighbor
//! that certifies the computed distance, making the shortest-path forest a
//! pure function of the input.

use super::{GraphError, PathWitness, Topology, Vertex};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Copy, Clone)]
struct HeapEntry {
    dist: f64,
    src: Vertex,
    vertex: Vertex,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap, we want the smallest label
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.src.cmp(&self.src))
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest-path tree from a single source.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    source: Vertex,
    dist: Vec<f64>,
    parent: Vec<Option<Vertex>>,
}

impl ShortestPaths {
    pub fn source(&self) -> Vertex {
        self.source
    }

    /// Distance to `v`; `+inf` when unreachable or not in the view.
    pub fn dist(&self, v: Vertex) -> f64 {
        self.dist[v as usize]
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v as usize]
    }

    /// The deterministic source-to-`v` path, or `None` if unreachable.
    pub fn path_to<T: Topology>(&self, host: &T, v: Vertex) -> Option<PathWitness> {
        if self.dist(v).is_infinite() {
            return None;
        }
        let mut seq = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            seq.push(p);
            cur = p;
        }
        seq.reverse();
        Some(PathWitness::new(host, seq).expect("parent chain is a valid path"))
    }
}

/// Shortest-path forest from a vertex set.
#[derive(Debug, Clone)]
pub struct MultiSourcePaths {
    dist: Vec<f64>,
    nearest: Vec<Option<Vertex>>,
    parent: Vec<Option<Vertex>>,
}

impl MultiSourcePaths {
    pub fn dist(&self, v: Vertex) -> f64 {
        self.dist[v as usize]
    }

    /// Nearest source of `v` with ties broken by smallest source id.
    pub fn nearest(&self, v: Vertex) -> Option<Vertex> {
        self.nearest[v as usize]
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v as usize]
    }
}

fn run_dijkstra<T: Topology>(g: &T, sources: &[Vertex]) -> (Vec<f64>, Vec<Option<Vertex>>) {
    let n = g.id_space();
    let mut dist = vec![f64::INFINITY; n];
    let mut nearest: Vec<Option<Vertex>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s as usize] = 0.0;
        nearest[s as usize] = Some(s);
        heap.push(HeapEntry {
            dist: 0.0,
            src: s,
            vertex: s,
        });
    }
    while let Some(HeapEntry {
        dist: d,
        src,
        vertex,
    }) = heap.pop()
    {
        if (d, src) != (dist[vertex as usize], nearest[vertex as usize].unwrap()) {
            continue; // stale entry
        }
        for (u, w) in g.neighbors(vertex) {
            let cand = d + w;
            let better = match cand.total_cmp(&dist[u as usize]) {
                Ordering::Less => true,
                Ordering::Equal => nearest[u as usize].is_none_or(|s| src < s),
                Ordering::Greater => false,
            };
            if better {
                dist[u as usize] = cand;
                nearest[u as usize] = Some(src);
                heap.push(HeapEntry {
                    dist: cand,
                    src,
                    vertex: u,
                });
            }
        }
    }
    (dist, nearest)
}

/// Smallest-id neighbor certifying each vertex's distance within the same
/// source region. Exact f64 comparison: the relaxation that set the label
/// guarantees at least one witness.
fn deterministic_parents<T: Topology>(
    g: &T,
    dist: &[f64],
    nearest: &[Option<Vertex>],
) -> Vec<Option<Vertex>> {
    let mut parent = vec![None; g.id_space()];
    for v in g.vertices() {
        let dv = dist[v as usize];
        if dv == 0.0 || dv.is_infinite() {
            continue;
        }
        for (u, w) in g.neighbors(v) {
            if dist[u as usize] + w == dv && nearest[u as usize] == nearest[v as usize] {
                parent[v as usize] = Some(u);
                break; // neighbors come in ascending id order
            }
        }
        debug_assert!(parent[v as usize].is_some(), "no parent certifies dist");
    }
    parent
}

/// Exact shortest-path distances from `source` within `g`.
pub fn sssp<T: Topology>(g: &T, source: Vertex) -> Result<ShortestPaths, GraphError> {
    if !g.contains(source) {
        return Err(GraphError::SourceNotInGraph(source));
    }
    let (dist, nearest) = run_dijkstra(g, &[source]);
    let parent = deterministic_parents(g, &dist, &nearest);
    Ok(ShortestPaths {
        source,
        dist,
        parent,
    })
}

/// Distance to the nearest of `sources` for every vertex of `g`.
pub fn multi_source_sssp<T: Topology>(
    g: &T,
    sources: &[Vertex],
) -> Result<MultiSourcePaths, GraphError> {
    if sources.is_empty() {
        return Err(GraphError::EmptySources);
    }
    let mut sorted: Vec<Vertex> = sources.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &s in &sorted {
        if !g.contains(s) {
            return Err(GraphError::SourceNotInGraph(s));
        }
    }
    let (dist, nearest) = run_dijkstra(g, &sorted);
    let parent = deterministic_parents(g, &dist, &nearest);
    Ok(MultiSourcePaths {
        dist,
        nearest,
        parent,
    })
}

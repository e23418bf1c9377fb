//! Deterministic graph generators for test corpora.
//!
//! Seeded weights are dyadic rationals (multiples of 1/64 in `[0.5, 2]`),
//! so path-length sums stay exact in f64 and order comparisons in the
//! verifiers never see rounding noise. Grids, trees, stars, and the
//! triangulation-based generators are all planar, hence valid minor-free
//! inputs for small `r`.

use super::{Vertex, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How generators assign edge weights.
#[derive(Debug, Clone, Copy)]
pub enum WeightRule {
    Unit,
    /// Dyadic weights in `[0.5, 2]`, drawn from a seeded generator.
    Seeded(u64),
}

fn dyadic(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(32u32..=128) as f64 / 64.0
}

fn weights_for(rule: WeightRule, count: usize) -> Vec<f64> {
    match rule {
        WeightRule::Unit => vec![1.0; count],
        WeightRule::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| dyadic(&mut rng)).collect()
        }
    }
}

/// Path `0 - 1 - ... - n-1` with unit weights.
pub fn path(n: usize) -> WeightedGraph {
    assert!(n >= 1);
    let edges = (1..n as Vertex).map(|v| (v - 1, v, 1.0));
    WeightedGraph::from_edges(n, edges).unwrap()
}

/// Star with center 0 and `n - 1` unit-weight rays.
pub fn star(n: usize) -> WeightedGraph {
    assert!(n >= 1);
    let edges = (1..n as Vertex).map(|v| (0, v, 1.0));
    WeightedGraph::from_edges(n, edges).unwrap()
}

/// `rows x cols` grid, vertex `(i, j)` at id `i * cols + j`.
pub fn grid(rows: usize, cols: usize, rule: WeightRule) -> WeightedGraph {
    assert!(rows >= 1 && cols >= 1);
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let v = (i * cols + j) as Vertex;
            if j + 1 < cols {
                edges.push((v, v + 1));
            }
            if i + 1 < rows {
                edges.push((v, v + cols as Vertex));
            }
        }
    }
    let ws = weights_for(rule, edges.len());
    let weighted = edges.into_iter().zip(ws).map(|((u, v), w)| (u, v, w));
    WeightedGraph::from_edges(rows * cols, weighted).unwrap()
}

/// Random tree: vertex `i` attaches to a uniformly chosen earlier vertex.
pub fn tree(n: usize, seed: u64) -> WeightedGraph {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n as Vertex {
        let p = rng.gen_range(0..v);
        let w = dyadic(&mut rng);
        edges.push((p, v, w));
    }
    WeightedGraph::from_edges(n, edges).unwrap()
}

/// Planar graph built from a grid prefix plus one random diagonal per
/// complete cell; weights are seeded dyadics. Planarity is preserved
/// because each diagonal stays inside its own face.
pub fn random_planar_like(n: usize, seed: u64) -> WeightedGraph {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (n as f64).sqrt().floor().max(1.0) as usize;
    let cols = n.div_ceil(rows);
    let keep = |i: usize, j: usize| i * cols + j < n;
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if !keep(i, j) {
                continue;
            }
            let v = (i * cols + j) as Vertex;
            if j + 1 < cols && keep(i, j + 1) {
                edges.push((v, v + 1));
            }
            if i + 1 < rows && keep(i + 1, j) {
                edges.push((v, v + cols as Vertex));
            }
        }
    }
    for i in 0..rows.saturating_sub(1) {
        for j in 0..cols.saturating_sub(1) {
            if keep(i, j) && keep(i, j + 1) && keep(i + 1, j) && keep(i + 1, j + 1) {
                let a = (i * cols + j) as Vertex;
                if rng.gen_bool(0.5) {
                    edges.push((a, a + cols as Vertex + 1));
                } else {
                    edges.push((a + 1, a + cols as Vertex));
                }
            }
        }
    }
    let weighted: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| {
            let w = dyadic(&mut rng);
            (u.min(v), u.max(v), w)
        })
        .collect();
    WeightedGraph::from_edges(n, weighted).unwrap()
}

/// Cycle plus a random subset of non-crossing chords from a recursive
/// polygon triangulation: outerplanar for every seed.
pub fn outerplanar_like(n: usize, seed: u64) -> WeightedGraph {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    if n == 2 {
        edges.push((0, 1));
    } else if n >= 3 {
        for v in 0..n as Vertex {
            edges.push((v.min((v + 1) % n as Vertex), v.max((v + 1) % n as Vertex)));
        }
        let mut stack = vec![(0u32, n as u32 - 1)];
        while let Some((lo, hi)) = stack.pop() {
            if hi - lo < 2 {
                continue;
            }
            let k = rng.gen_range(lo + 1..hi);
            if k > lo + 1 && rng.gen_bool(0.67) {
                edges.push((lo, k));
            }
            if k < hi - 1 && rng.gen_bool(0.67) {
                edges.push((k, hi));
            }
            stack.push((lo, k));
            stack.push((k, hi));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let weighted: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| {
            let w = dyadic(&mut rng);
            (u, v, w)
        })
        .collect();
    WeightedGraph::from_edges(n, weighted).unwrap()
}

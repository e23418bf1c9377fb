//! The standard test corpus: deterministic graphs spanning paths, stars,
//! random trees, grids, planar-like, and outerplanar-like families.
//!
//! Every entry carries the excluded-clique parameters it is a valid
//! input for: forests are `K_3`-minor-free so they run at `r = 3`,
//! outerplanar graphs at `r = 4`, and everything here is planar, hence
//! valid at `r = 5`.

use crate::graph::{self, WeightRule, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Path,
    Star,
    Tree,
    Grid,
    Planar,
    Outerplanar,
}

pub struct CorpusEntry {
    pub name: String,
    pub kind: GraphKind,
    pub graph: WeightedGraph,
    /// Excluded-clique parameters this graph is a valid input for.
    pub r_values: Vec<u32>,
}

fn entry(name: String, kind: GraphKind, graph: WeightedGraph, r_values: &[u32]) -> CorpusEntry {
    CorpusEntry {
        name,
        kind,
        graph,
        r_values: r_values.to_vec(),
    }
}

/// 52 deterministic graphs, up to 20x20 grids and n = 400 planar-like.
pub fn standard_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in [2usize, 3, 5, 9, 17, 33, 50, 65, 129, 257, 400] {
        out.push(entry(
            format!("path({n})"),
            GraphKind::Path,
            graph::path(n),
            &[3, 5],
        ));
    }
    for n in [2usize, 4, 8, 33, 100] {
        out.push(entry(
            format!("star({n})"),
            GraphKind::Star,
            graph::star(n),
            &[3, 5],
        ));
    }
    for (n, seed) in [
        (10usize, 1u64),
        (25, 2),
        (50, 3),
        (100, 4),
        (200, 5),
        (400, 6),
        (64, 7),
        (150, 8),
        (300, 14),
    ] {
        out.push(entry(
            format!("tree({n},{seed})"),
            GraphKind::Tree,
            graph::tree(n, seed),
            &[3, 5],
        ));
    }
    for (a, b) in [
        (2usize, 2usize),
        (3, 3),
        (4, 5),
        (5, 5),
        (8, 8),
        (10, 10),
        (12, 15),
        (20, 20),
    ] {
        out.push(entry(
            format!("grid({a}x{b})"),
            GraphKind::Grid,
            graph::grid(a, b, WeightRule::Unit),
            &[5],
        ));
    }
    for (a, b, seed) in [
        (3usize, 4usize, 9u64),
        (6, 6, 10),
        (9, 7, 11),
        (14, 10, 12),
        (20, 20, 13),
    ] {
        out.push(entry(
            format!("grid({a}x{b},{seed})"),
            GraphKind::Grid,
            graph::grid(a, b, WeightRule::Seeded(seed)),
            &[5],
        ));
    }
    for (n, seed) in [
        (12usize, 100u64),
        (30, 101),
        (55, 102),
        (80, 103),
        (120, 104),
        (180, 105),
        (250, 106),
        (320, 107),
        (400, 108),
    ] {
        out.push(entry(
            format!("planar({n},{seed})"),
            GraphKind::Planar,
            graph::random_planar_like(n, seed),
            &[5],
        ));
    }
    for (n, seed) in [
        (8usize, 200u64),
        (20, 201),
        (40, 202),
        (80, 203),
        (160, 204),
    ] {
        out.push(entry(
            format!("outerplanar({n},{seed})"),
            GraphKind::Outerplanar,
            graph::outerplanar_like(n, seed),
            &[4, 5],
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_connected;

    #[test]
    fn corpus_is_large_connected_and_deterministic() {
        let corpus = standard_corpus();
        assert!(corpus.len() >= 50, "only {} graphs", corpus.len());
        for e in &corpus {
            assert!(is_connected(&e.graph), "{} disconnected", e.name);
            assert!(!e.r_values.is_empty());
        }
        let again = standard_corpus();
        for (a, b) in corpus.iter().zip(again.iter()) {
            assert_eq!(a.graph, b.graph, "{} not deterministic", a.name);
        }
    }
}

//! Benchmark-only crate; see `benches/pipeline.rs`.

use copse_core::{graph, WeightedGraph};

/// The fixed instance the pipeline benchmarks run on.
pub fn bench_graph() -> WeightedGraph {
    graph::random_planar_like(200, 9001)
}

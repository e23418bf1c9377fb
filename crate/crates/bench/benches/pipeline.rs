use copse_bench::bench_graph;
use copse_core::{
    build_decomposition, build_partition, build_tree_cover, diameter, Oracle, Vertex,
};
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn bench_decomposition(c: &mut Criterion) {
    let g = bench_graph();
    let diam = diameter(&g).unwrap();
    c.bench_function("decompose_planar200", |b| {
        b.iter(|| build_decomposition(black_box(&g), 5, diam / 8.0).unwrap());
    });
}

fn bench_partition(c: &mut Criterion) {
    let g = bench_graph();
    let diam = diameter(&g).unwrap();
    let dec = build_decomposition(&g, 5, diam / 8.0).unwrap();
    c.bench_function("partition_planar200", |b| {
        b.iter(|| build_partition(black_box(&g), black_box(&dec)));
    });
}

fn bench_cover_build(c: &mut Criterion) {
    let g = bench_graph();
    c.bench_function("treecover_eps0.5_planar200", |b| {
        b.iter(|| build_tree_cover(black_box(&g), 0.5, 5).unwrap());
    });
}

fn bench_oracle_query(c: &mut Criterion) {
    let g = bench_graph();
    let n = g.vertex_count() as Vertex;
    let tc = build_tree_cover(&g, 0.5, 5).unwrap();
    let oracle = Oracle::from_cover(&tc).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    c.bench_function("oracle_query_planar200", |b| {
        b.iter_batched(
            || (rng.gen_range(0..n), rng.gen_range(0..n)),
            |(u, v)| oracle.query(u, v).unwrap(),
            BatchSize::SmallInput,
        );
    });
}

criterion_group!(
    benches,
    bench_decomposition,
    bench_partition,
    bench_cover_build,
    bench_oracle_query
);
criterion_main!(benches);

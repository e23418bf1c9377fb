use super::verify::{exhaustive_oracle_hops, verify_partition, verify_shortcut, PairSample};
use super::*;
use crate::copdecomp::{build_decomposition, Skeleton, Supernode};
use crate::graph::{self, sssp, WeightRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One supernode spanning the whole unit path, skeleton = the path
/// rooted at 0. Used by the golden net/cluster tests.
fn single_supernode_path(n: usize, delta: f64) -> (graph::WeightedGraph, CopDecomposition) {
    let g = graph::path(n);
    let vertices: Vec<Vertex> = (0..n as Vertex).collect();
    let links: Vec<(Vertex, Vertex)> = (1..n as Vertex).map(|v| (v, v - 1)).collect();
    let sn = Supernode {
        id: 0,
        vertices: vertices.clone(),
        skeleton: Skeleton::new(0, vertices.clone(), links),
        init_domain: vertices.clone(),
        parent: None,
        depth: 0,
    };
    let dec = CopDecomposition::from_parts(&g, 3, delta, vec![sn], vec![0; n]);
    (g, dec)
}

#[test]
fn wide_net_gives_single_cluster() {
    let (g, dec) = single_supernode_path(5, 100.0);
    let c = build_partition(&g, &dec);
    assert_eq!(c.cluster_count(), 1);
    assert_eq!(c.clusters[0].center, 0);
    assert_eq!(c.clusters[0].vertices, vec![0, 1, 2, 3, 4]);
}

/// Golden clustering frozen from a hand run of the greedy net and
/// nearest-net assignment: net {0, 2, 4}, clusters {0,1}, {2,3}, {4}.
#[test]
fn golden_path_clustering() {
    let (g, dec) = single_supernode_path(5, 1.5);
    let c = build_partition(&g, &dec);
    assert_eq!(c.cluster_count(), 3);
    assert_eq!(c.clusters[0].center, 0);
    assert_eq!(c.clusters[0].vertices, vec![0, 1]);
    assert_eq!(c.clusters[1].center, 2);
    assert_eq!(c.clusters[1].vertices, vec![2, 3]);
    assert_eq!(c.clusters[2].center, 4);
    assert_eq!(c.clusters[2].vertices, vec![4]);

    let gg = cluster_graph(&g, &c);
    assert_eq!(gg.node_count(), 3);
    assert_eq!(gg.edge_count(), 2);
    assert!(gg.are_adjacent(0, 1));
    assert!(gg.are_adjacent(1, 2));
    assert!(!gg.are_adjacent(0, 2));

    let whole = sssp(&g, 0).unwrap().path_to(&g, 4).unwrap();
    assert_eq!(path_cost(&c, &gg, &whole).unwrap(), PathCost::Hops(2));

    let inner = sssp(&g, 2).unwrap().path_to(&g, 3).unwrap();
    assert_eq!(path_cost(&c, &gg, &inner).unwrap(), PathCost::Hops(0));

    let crossing = sssp(&g, 1).unwrap().path_to(&g, 2).unwrap();
    assert_eq!(path_cost(&c, &gg, &crossing).unwrap(), PathCost::Hops(1));

    let rep = verify_partition(&g, &dec, &c);
    assert!(rep.is_clean(), "{rep}");
}

#[test]
fn cluster_graph_edge_count_never_exceeds_host() {
    let g = graph::random_planar_like(70, 13);
    let (_, c) = partition_with_diameter(&g, 5, 3.0).unwrap();
    let gg = cluster_graph(&g, &c);
    assert!(gg.edge_count() <= g.edge_count());
}

#[test]
fn single_cluster_means_all_costs_zero() {
    let g = graph::tree(30, 5);
    let all: Vec<Vertex> = (0..30).collect();
    let c = Clustering::from_parts(
        1.0,
        vec![Cluster {
            id: 0,
            center: 0,
            vertices: all,
            supernode: 0,
        }],
        30,
    );
    let gg = cluster_graph(&g, &c);
    assert_eq!(gg.node_count(), 1);
    assert_eq!(gg.edge_count(), 0);
    let sp = sssp(&g, 0).unwrap();
    for v in 1..30 {
        let p = sp.path_to(&g, v).unwrap();
        assert_eq!(path_cost(&c, &gg, &p).unwrap(), PathCost::Hops(0));
    }
}

#[test]
fn partition_invariants_hold_on_corpus() {
    let cases = [
        (graph::grid(6, 6, WeightRule::Seeded(2)), 5u32),
        (graph::random_planar_like(90, 17), 5),
        (graph::tree(60, 3), 3),
        (graph::outerplanar_like(40, 6), 5),
    ];
    for (g, r) in cases {
        let diam = graph::diameter(&g).unwrap();
        for delta in [diam / 3.0, diam / 9.0] {
            let dec = build_decomposition(&g, r, delta).unwrap();
            let c = build_partition(&g, &dec);
            let rep = verify_partition(&g, &dec, &c);
            assert!(rep.is_clean(), "r={r} delta={delta}: {rep}");
        }
    }
}

#[test]
fn shortcut_audit_clean_on_planar_corpus() {
    let g = graph::random_planar_like(80, 23);
    let diam = graph::diameter(&g).unwrap();
    let dec = build_decomposition(&g, 5, diam / 2.0).unwrap();
    let c = build_partition(&g, &dec);
    let rep = verify_shortcut(
        &g,
        &dec,
        &c,
        PairSample::Random {
            seed: 99,
            count: 400,
        },
        None,
    );
    assert!(rep.is_clean(), "{}", rep.report);
    // delta/r = diam/10 exceeds single edge weights here, so the sampler
    // must have hit short paths
    assert!(rep.short_path_max_cost.is_some());
}

#[test]
fn partition_build_is_deterministic() {
    let g = graph::grid(7, 5, WeightRule::Seeded(8));
    let (deca, ca) = partition_with_diameter(&g, 5, 4.0).unwrap();
    let (decb, cb) = partition_with_diameter(&g, 5, 4.0).unwrap();
    assert_eq!(deca, decb);
    assert_eq!(ca, cb);
}

/// Path-graph tightness on the canonical one-supernode decomposition of
/// a path (skeleton = the path itself): with net parameter
/// delta = eps * diam / 4, the endpoint cost lands in
/// `[floor(1/(4 eps)), ceil(4 / eps)]`, bracketing the inverse-epsilon
/// hop count a path forces on any such clustering.
#[test]
fn path_tightness_brackets_inverse_epsilon() {
    let diam = 128.0;
    for eps in [0.25f64, 0.5] {
        let (g, dec) = single_supernode_path(129, eps * diam / 4.0);
        let c = build_partition(&g, &dec);
        let gg = cluster_graph(&g, &c);
        let p = sssp(&g, 0).unwrap().path_to(&g, 128).unwrap();
        let cost = path_cost(&c, &gg, &p).unwrap().hops().unwrap() as f64;
        let lo = (1.0 / (4.0 * eps)).floor();
        let hi = (4.0 / eps).ceil();
        assert!(
            (lo..=hi).contains(&cost),
            "eps={eps}: endpoint cost {cost} outside [{lo}, {hi}]"
        );
    }
}

/// BFS cost must equal the exhaustive minimum over simple cluster
/// sequences on small random instances.
#[test]
fn path_cost_matches_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for instance in 0..40 {
        let n = rng.gen_range(6..=24);
        let g = graph::random_planar_like(n, rng.gen());
        let k = rng.gen_range(2..=12.min(n));
        // grow k connected clusters from seed vertices
        let mut owner = vec![ClusterId::MAX; n];
        let seeds: Vec<Vertex> = {
            let mut vs: Vec<Vertex> = (0..n as Vertex).collect();
            for i in 0..vs.len() {
                let j = rng.gen_range(i..vs.len());
                vs.swap(i, j);
            }
            vs.truncate(k);
            vs
        };
        let mut frontier: std::collections::VecDeque<Vertex> = Default::default();
        for (i, &s) in seeds.iter().enumerate() {
            owner[s as usize] = i as ClusterId;
            frontier.push_back(s);
        }
        while let Some(v) = frontier.pop_front() {
            for (u, _) in crate::graph::Topology::neighbors(&g, v) {
                if owner[u as usize] == ClusterId::MAX {
                    owner[u as usize] = owner[v as usize];
                    frontier.push_back(u);
                }
            }
        }
        let mut clusters: Vec<Cluster> = (0..k)
            .map(|i| Cluster {
                id: i as ClusterId,
                center: seeds[i],
                vertices: Vec::new(),
                supernode: 0,
            })
            .collect();
        for v in 0..n as Vertex {
            clusters[owner[v as usize] as usize].vertices.push(v);
        }
        for cl in &mut clusters {
            cl.vertices.sort_unstable();
        }
        let c = Clustering::from_parts(1.0, clusters, n);
        let gg = cluster_graph(&g, &c);

        for _ in 0..10 {
            let a = rng.gen_range(0..n as Vertex);
            let b = rng.gen_range(0..n as Vertex);
            if a == b {
                continue;
            }
            let Some(p) = sssp(&g, a).unwrap().path_to(&g, b) else {
                continue;
            };
            let allowed: Vec<ClusterId> = {
                let mut s: Vec<ClusterId> = p
                    .vertices()
                    .iter()
                    .map(|&v| c.owner_of(v).unwrap())
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            };
            let fast = path_cost(&c, &gg, &p).unwrap().hops();
            let slow = if c.owner_of(a) == c.owner_of(b) {
                Some(0)
            } else {
                exhaustive_oracle_hops(
                    &gg,
                    c.owner_of(a).unwrap(),
                    c.owner_of(b).unwrap(),
                    &allowed,
                )
            };
            assert_eq!(fast, slow, "instance {instance}: pair ({a}, {b})");
        }
    }
}

#[test]
fn epsilon_facing_build_bounds_cluster_diameter() {
    let g = graph::random_planar_like(45, 12);
    let diam = graph::diameter(&g).unwrap();
    for eps in [0.3f64, 0.6] {
        let (dec, c) = partition_for_epsilon(&g, 5, eps).unwrap();
        assert_eq!(dec.delta, eps * diam / 4.0);
        assert!(c.diameter_bound() <= eps * diam);
        let rep = verify_partition(&g, &dec, &c);
        assert!(rep.is_clean(), "{rep}");
    }
    assert!(matches!(
        partition_for_epsilon(&g, 5, 0.0),
        Err(ClusteringError::BadEpsilon(_))
    ));
}

//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measurements (run with `--nocapture` to see them).
//!
//! 1. Buffered cop decomposition verifiers are clean on the corpus.
//! 2. Shortcut partition: exact diameter bound, bounded short-path cost,
//!    path-graph tightness bracket.
//! 3. Cluster path cost equals an exhaustive oracle on small instances.
//! 4. Steiner point removal: valid minors, non-contraction, bounded
//!    tree-corpus distortion.
//! 5. Tree cover + oracle: exhaustive stretch audit and exact query
//!    agreement.
//! 6. Byte-identical artifacts across repeated pipeline runs.
//! 7. Runtime assertions (including per-assignment connectivity) never
//!    fire on the corpus.

use copse_core::copdecomp::verify as dverify;
use copse_core::copdecomp::{build_decomposition_with, BuildOptions, CopDecomposition};
use copse_core::corpus::{standard_corpus, GraphKind};
use copse_core::graph::{self, sssp};
use copse_core::scatter::spr;
use copse_core::shortcut::verify::{
    exhaustive_oracle_hops, verify_partition, verify_shortcut, PairSample,
};
use copse_core::shortcut::{build_partition, cluster_graph, path_cost, Clustering};
use copse_core::treecover::{build_tree_cover, verify_cover};
use copse_core::{diameter, Oracle, Vertex, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::Instant;

struct Config {
    label: String,
    graph: WeightedGraph,
    r: u32,
    dec: CopDecomposition,
    clustering: Clustering,
}

/// Every corpus graph at r in {3, 5} (where valid) and delta in
/// {diam/2, diam/8}, built once with the per-assignment connectivity
/// check switched on and shared by the criteria below.
fn pipeline() -> &'static [Config] {
    static CELL: OnceLock<Vec<Config>> = OnceLock::new();
    CELL.get_or_init(|| {
        let opts = BuildOptions {
            connectivity_check_per_assignment: true,
        };
        let mut out = Vec::new();
        for entry in standard_corpus() {
            let diam = diameter(&entry.graph).expect("corpus graphs are connected");
            for &r in entry.r_values.iter().filter(|&&r| r == 3 || r == 5) {
                for (tag, delta) in [("diam/2", diam / 2.0), ("diam/8", diam / 8.0)] {
                    let dec = build_decomposition_with(&entry.graph, r, delta, opts)
                        .expect("corpus graphs are valid inputs");
                    let clustering = build_partition(&entry.graph, &dec);
                    out.push(Config {
                        label: format!("{} r={r} delta={tag}", entry.name),
                        graph: entry.graph.clone(),
                        r,
                        dec,
                        clustering,
                    });
                }
            }
        }
        out
    })
}

#[test]
fn criterion_1_buffered_cop_decomposition() {
    let t = Instant::now();
    let configs = pipeline();
    for c in configs {
        for rep in [
            dverify::verify_radius(&c.dec, &c.graph),
            dverify::verify_skeleton(&c.dec, &c.graph),
            dverify::verify_buffer(&c.dec, &c.graph),
            dverify::verify_tree_decomposition(&c.dec, &c.graph),
        ] {
            assert!(rep.is_clean(), "criterion 1 FAIL at {}: {rep}", c.label);
        }
    }
    println!(
        "[criterion 1] PASS: radius/skeleton/buffer/tree-decomposition clean on {} configs ({} graphs) in {:.1?}",
        configs.len(),
        standard_corpus().len(),
        t.elapsed()
    );
}

#[test]
fn criterion_2_shortcut_partition() {
    let t = Instant::now();
    let configs = pipeline();
    let mut max_seen = 0u32;
    for (i, c) in configs.iter().enumerate() {
        let rep = verify_partition(&c.graph, &c.dec, &c.clustering);
        assert!(rep.is_clean(), "criterion 2 FAIL at {}: {rep}", c.label);

        let audit = verify_shortcut(
            &c.graph,
            &c.dec,
            &c.clustering,
            PairSample::Random {
                seed: 0xC0FFEE + i as u64,
                count: 2000,
            },
            None, // ceiling defaults to 54 r
        );
        assert!(
            audit.is_clean(),
            "criterion 2 FAIL at {}: {}",
            c.label,
            audit.report
        );
        assert_eq!(audit.ceiling, 54.0 * c.r as f64);
        if let Some(m) = audit.short_path_max_cost {
            max_seen = max_seen.max(m);
        }
    }

    // path tightness: net clustering of the canonical one-supernode path
    // decomposition, delta = eps * diam / 4
    for eps in [0.25f64, 0.5] {
        let n = 129;
        let diam = (n - 1) as f64;
        let (g, dec) = single_supernode_path(n, eps * diam / 4.0);
        let clustering = build_partition(&g, &dec);
        let gg = cluster_graph(&g, &clustering);
        let p = sssp(&g, 0).unwrap().path_to(&g, n as Vertex - 1).unwrap();
        let cost = path_cost(&clustering, &gg, &p)
            .unwrap()
            .hops()
            .expect("endpoint clusters connect") as f64;
        let lo = (1.0 / (4.0 * eps)).floor();
        let hi = (4.0 / eps).ceil();
        assert!(
            (lo..=hi).contains(&cost),
            "criterion 2 FAIL: path tightness eps={eps}: cost {cost} outside [{lo}, {hi}]"
        );
    }
    println!(
        "[criterion 2] PASS: diameter exact, short-path max cost {max_seen} within ceiling, tightness bracketed, in {:.1?}",
        t.elapsed()
    );
}

fn single_supernode_path(n: usize, delta: f64) -> (WeightedGraph, CopDecomposition) {
    use copse_core::copdecomp::{Skeleton, Supernode};
    let g = graph::path(n);
    let vertices: Vec<Vertex> = (0..n as Vertex).collect();
    let links: Vec<(Vertex, Vertex)> = (1..n as Vertex).map(|v| (v, v - 1)).collect();
    let sn = Supernode {
        id: 0,
        vertices: vertices.clone(),
        skeleton: Skeleton::new(0, vertices.clone(), links),
        init_domain: vertices,
        parent: None,
        depth: 0,
    };
    let dec = CopDecomposition::from_parts(&g, 3, delta, vec![sn], vec![0; n]);
    (g, dec)
}

#[test]
fn criterion_3_path_cost_oracle_equivalence() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut checked_pairs = 0usize;
    for instance in 0..200 {
        let n = rng.gen_range(6..=26);
        let g = graph::random_planar_like(n, rng.gen());
        let k = rng.gen_range(2..=12.min(n));
        let clustering = random_connected_clustering(&g, k, &mut rng);
        let gg = cluster_graph(&g, &clustering);
        for _ in 0..12 {
            let a = rng.gen_range(0..n as Vertex);
            let b = rng.gen_range(0..n as Vertex);
            if a == b {
                continue;
            }
            let Some(p) = sssp(&g, a).unwrap().path_to(&g, b) else {
                continue;
            };
            let allowed: Vec<u32> = {
                let mut s: Vec<u32> = p
                    .vertices()
                    .iter()
                    .map(|&v| clustering.owner_of(v).unwrap())
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            };
            let fast = path_cost(&clustering, &gg, &p).unwrap().hops();
            let slow = if clustering.owner_of(a) == clustering.owner_of(b) {
                Some(0)
            } else {
                exhaustive_oracle_hops(
                    &gg,
                    clustering.owner_of(a).unwrap(),
                    clustering.owner_of(b).unwrap(),
                    &allowed,
                )
            };
            assert_eq!(
                fast, slow,
                "criterion 3 FAIL: instance {instance} pair ({a}, {b})"
            );
            checked_pairs += 1;
        }
    }
    println!(
        "[criterion 3] PASS: 200 instances, {checked_pairs} pairs, exact oracle agreement, in {:.1?}",
        t.elapsed()
    );
}

fn random_connected_clustering(g: &WeightedGraph, k: usize, rng: &mut ChaCha8Rng) -> Clustering {
    use copse_core::shortcut::Cluster;
    let n = g.vertex_count();
    let mut owner = vec![u32::MAX; n];
    let mut seeds: Vec<Vertex> = (0..n as Vertex).collect();
    for i in 0..seeds.len() {
        let j = rng.gen_range(i..seeds.len());
        seeds.swap(i, j);
    }
    seeds.truncate(k);
    let mut frontier: std::collections::VecDeque<Vertex> = Default::default();
    for (i, &s) in seeds.iter().enumerate() {
        owner[s as usize] = i as u32;
        frontier.push_back(s);
    }
    while let Some(v) = frontier.pop_front() {
        for (u, _) in copse_core::Topology::neighbors(g, v) {
            if owner[u as usize] == u32::MAX {
                owner[u as usize] = owner[v as usize];
                frontier.push_back(u);
            }
        }
    }
    let mut clusters: Vec<Cluster> = seeds
        .iter()
        .enumerate()
        .map(|(i, &s)| Cluster {
            id: i as u32,
            center: s,
            vertices: Vec::new(),
            supernode: 0,
        })
        .collect();
    for v in 0..n as Vertex {
        clusters[owner[v as usize] as usize].vertices.push(v);
    }
    for c in &mut clusters {
        c.vertices.sort_unstable();
    }
    Clustering::from_parts(1.0, clusters, n)
}

#[test]
fn criterion_4_steiner_point_removal() {
    let t = Instant::now();
    let mut tree_max_distortion = 0.0f64;
    let mut overall_max = 0.0f64;
    let mut runs = 0usize;
    for (idx, entry) in standard_corpus().into_iter().enumerate() {
        let kind_ok = matches!(
            entry.kind,
            GraphKind::Tree
                | GraphKind::Path
                | GraphKind::Star
                | GraphKind::Outerplanar
                | GraphKind::Planar
        );
        let n = entry.graph.vertex_count();
        if !kind_ok || !(2..=260).contains(&n) {
            continue;
        }
        let r = entry.r_values[0];
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + idx as u64);
        for k in [2usize, n / 4, n / 2] {
            let k = k.clamp(2, n);
            let mut ids: Vec<Vertex> = (0..n as Vertex).collect();
            for i in 0..ids.len() {
                let j = rng.gen_range(i..ids.len());
                ids.swap(i, j);
            }
            ids.truncate(k);
            let tm = spr::solve(&entry.graph, &ids, spr::SprParams { zeta: 16.0, r })
                .expect("corpus SPR instances are valid");
            let rep = spr::verify_minor(&tm, &entry.graph);
            assert!(
                rep.report.is_clean(),
                "criterion 4 FAIL at {} k={k}: {}",
                entry.name,
                rep.report
            );
            assert!(
                rep.min_distortion >= 1.0,
                "criterion 4 FAIL at {} k={k}: contraction {}",
                entry.name,
                rep.min_distortion
            );
            assert!(
                rep.max_distortion.is_finite(),
                "criterion 4 FAIL at {} k={k}: infinite distortion",
                entry.name
            );
            if matches!(
                entry.kind,
                GraphKind::Tree | GraphKind::Path | GraphKind::Star
            ) {
                tree_max_distortion = tree_max_distortion.max(rep.max_distortion);
                assert!(
                    rep.max_distortion <= 64.0,
                    "criterion 4 FAIL at {} k={k}: tree distortion {} above 64",
                    entry.name,
                    rep.max_distortion
                );
            }
            overall_max = overall_max.max(rep.max_distortion);
            runs += 1;
        }
    }
    println!(
        "[criterion 4] PASS: {runs} SPR runs, tree-corpus max distortion {tree_max_distortion:.3} (<= 64), overall max {overall_max:.3}, in {:.1?}",
        t.elapsed()
    );
}

#[test]
fn criterion_5_tree_cover_and_oracle() {
    let t = Instant::now();
    let mut runs = 0usize;
    let mut worst_stretch = 0.0f64;
    let mut scale_report = String::new();
    for (idx, entry) in standard_corpus().into_iter().enumerate() {
        let n = entry.graph.vertex_count();
        if n > 300 {
            continue;
        }
        let r = *entry.r_values.last().unwrap();
        for eps in [0.25f64, 0.5] {
            let tc = build_tree_cover(&entry.graph, eps, r).expect("corpus covers build");
            let rep = verify_cover(&tc, &entry.graph);
            assert!(
                rep.report.is_clean(),
                "criterion 5 FAIL at {} eps={eps}: {}",
                entry.name,
                rep.report
            );
            assert_eq!(
                rep.dominance_violations, 0,
                "criterion 5 FAIL at {} eps={eps}",
                entry.name
            );
            assert_eq!(
                rep.uncovered_pairs, 0,
                "criterion 5 FAIL at {} eps={eps}",
                entry.name
            );
            assert!(
                rep.max_stretch <= 1.0 + eps,
                "criterion 5 FAIL at {} eps={eps}: stretch {}",
                entry.name,
                rep.max_stretch
            );
            worst_stretch = worst_stretch.max(rep.max_stretch / (1.0 + eps));

            let oracle = Oracle::from_cover(&tc).expect("verified covers build oracles");
            let mut rng = ChaCha8Rng::seed_from_u64(5000 + idx as u64);
            for _ in 0..10_000usize {
                let u = rng.gen_range(0..n as Vertex);
                let v = rng.gen_range(0..n as Vertex);
                let fast = oracle.query(u, v).expect("covered pair");
                let slow = oracle.query_by_walking(u, v).expect("covered pair");
                assert_eq!(
                    fast, slow,
                    "criterion 5 FAIL at {} eps={eps}: query ({u}, {v})",
                    entry.name
                );
            }
            if runs < 4 {
                scale_report.push_str(&format!(
                    " [{} eps={eps}: {:?}]",
                    entry.name,
                    tc.scale_profile()
                ));
            }
            runs += 1;
        }
    }
    println!(
        "[criterion 5] PASS: {runs} covers audited exhaustively, relative stretch max {:.4}, 10^4 oracle queries each; sample scale profiles:{scale_report}; in {:.1?}",
        worst_stretch,
        t.elapsed()
    );
}

#[test]
fn criterion_6_deterministic_artifacts() {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    std::fs::write(
        &input,
        copse_core::save_edge_list(&graph::random_planar_like(60, 606)),
    )
    .unwrap();
    let terminals = dir.path().join("k.txt");
    std::fs::write(&terminals, "0\n5\n11\n23\n42\n").unwrap();

    let stages: Vec<Vec<String>> = vec![
        vec![
            "decompose".into(),
            "--r".into(),
            "5".into(),
            "--delta".into(),
            "3.5".into(),
        ],
        vec![
            "partition".into(),
            "--r".into(),
            "5".into(),
            "--epsilon".into(),
            "0.5".into(),
        ],
        vec![
            "spr".into(),
            "--r".into(),
            "5".into(),
            "--terminals".into(),
            terminals.display().to_string(),
        ],
        vec![
            "treecover".into(),
            "--r".into(),
            "5".into(),
            "--epsilon".into(),
            "0.25".into(),
        ],
        vec![
            "oracle".into(),
            "build".into(),
            "--r".into(),
            "5".into(),
            "--epsilon".into(),
            "0.5".into(),
        ],
        vec![
            "oracle".into(),
            "bench".into(),
            "--r".into(),
            "5".into(),
            "--epsilon".into(),
            "0.5".into(),
            "--count".into(),
            "200".into(),
        ],
        vec![
            "verify".into(),
            "--r".into(),
            "5".into(),
            "--epsilon".into(),
            "0.5".into(),
            "--verify".into(),
            "exhaustive".into(),
        ],
    ];

    for stage in &stages {
        let mut outputs: Vec<std::collections::BTreeMap<String, Vec<u8>>> = Vec::new();
        for round in 0..2 {
            let out = dir.path().join(format!("{}-{round}", stage.join("-")));
            let mut args: Vec<String> = vec!["copse".into()];
            args.extend(stage.iter().cloned());
            args.extend([
                "--input".into(),
                input.display().to_string(),
                "--out".into(),
                out.display().to_string(),
            ]);
            let code = copse_cli::run(args);
            assert_eq!(code, 0, "criterion 6 FAIL: stage {stage:?} exited {code}");
            let mut files = std::collections::BTreeMap::new();
            for f in std::fs::read_dir(&out).unwrap() {
                let f = f.unwrap();
                files.insert(
                    f.file_name().to_string_lossy().into_owned(),
                    std::fs::read(f.path()).unwrap(),
                );
            }
            assert!(!files.is_empty(), "stage {stage:?} wrote no artifacts");
            outputs.push(files);
        }
        let (a, b) = (&outputs[0], &outputs[1]);
        assert_eq!(
            a.keys().collect::<Vec<_>>(),
            b.keys().collect::<Vec<_>>(),
            "criterion 6 FAIL: stage {stage:?} artifact sets differ"
        );
        for (name, bytes) in a {
            assert_eq!(
                bytes, &b[name],
                "criterion 6 FAIL: stage {stage:?} artifact {name} not byte-identical"
            );
        }
    }
    println!(
        "[criterion 6] PASS: {} pipeline stages byte-identical across runs, in {:.1?}",
        stages.len(),
        t.elapsed()
    );
}

#[test]
fn criterion_7_runtime_assertions_never_fire() {
    let t = Instant::now();
    // pipeline() builds every corpus configuration with invariant
    // assertions active and the per-assignment connectivity check
    // enabled; reaching here means none fired.
    let configs = pipeline();
    assert!(!configs.is_empty());
    println!(
        "[criterion 7] PASS: call invariants, width bound, and per-assignment connectivity held over {} debug-checked builds, in {:.1?}",
        configs.len(),
        t.elapsed()
    );
}

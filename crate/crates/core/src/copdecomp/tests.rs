use super::verify::{
    verify_all, verify_buffer, verify_radius, verify_skeleton, verify_structure,
    verify_tree_decomposition,
};
use super::*;
use crate::graph::{self, WeightRule, WeightedGraph};
use build::{build_decomposition, build_decomposition_with, BuildOptions};

fn checked() -> BuildOptions {
    BuildOptions {
        connectivity_check_per_assignment: true,
    }
}

#[test]
fn single_vertex_is_one_supernode() {
    let g = graph::path(1);
    let dec = build_decomposition(&g, 3, 5.0).unwrap();
    assert_eq!(dec.supernode_count(), 1);
    let s = dec.supernode(0).unwrap();
    assert_eq!(s.vertices, vec![0]);
    assert_eq!(s.skeleton.members(), &[0]);
    assert_eq!(s.skeleton.leaf_count(), 0);
    assert_eq!(s.parent, None);
    assert!(verify_all(&dec, &g).is_clean());
}

/// Golden decomposition of the 5-vertex unit path with delta = 10, r = 3,
/// frozen from a hand simulation of the construction: the root carves out
/// {0}, its child starts at {1}, and the buffer step pulls 2, 3, 4 into
/// that child because they all sit within delta/r = 10/3 of the boundary
/// vertex 1 inside the child's cut-off ancestor's domain.
#[test]
fn golden_path_decomposition() {
    let g = graph::path(5);
    let dec = build_decomposition_with(&g, 3, 10.0, checked()).unwrap();

    assert_eq!(dec.supernode_count(), 2);
    let root = dec.supernode(0).unwrap();
    let child = dec.supernode(1).unwrap();
    assert_eq!(root.vertices, vec![0]);
    assert_eq!(root.skeleton.members(), &[0]);
    assert_eq!(child.vertices, vec![1, 2, 3, 4]);
    assert_eq!(child.skeleton.members(), &[1]);
    assert_eq!(child.parent, Some(0));
    assert_eq!(dec.assignment[..5], [0, 1, 1, 1, 1]);

    // domains
    assert_eq!(dec.dom_vertices(0).unwrap(), vec![0, 1, 2, 3, 4]);
    assert_eq!(dec.dom_vertices(1).unwrap(), vec![1, 2, 3, 4]);

    // bags: child sees the root through edge (0, 1)
    let bags = dec.expansion_bags();
    assert_eq!(bags.bag(0), &[0]);
    assert_eq!(bags.bag(1), &[1, 0]);
    assert_eq!(bags.max_bag_size(), 2);

    let rep = verify_all(&dec, &g);
    assert!(rep.is_clean(), "{rep}");
}

#[test]
fn decomposition_is_deterministic() {
    let g = graph::random_planar_like(80, 21);
    let a = build_decomposition(&g, 5, 4.0).unwrap();
    let b = build_decomposition(&g, 5, 4.0).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rejects_bad_inputs() {
    let g = graph::path(3);
    assert_eq!(
        build_decomposition(&g, 2, 1.0).unwrap_err(),
        DecompositionError::WidthTooSmall(2)
    );
    assert_eq!(
        build_decomposition(&g, 3, 0.0).unwrap_err(),
        DecompositionError::NonPositiveRadius(0.0)
    );
    let disconnected = WeightedGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
    assert_eq!(
        build_decomposition(&disconnected, 3, 1.0).unwrap_err(),
        DecompositionError::Disconnected
    );
}

#[test]
fn all_verifiers_clean_on_small_corpus() {
    // r = 3 requires K_3-minor-free inputs, i.e. forests; every planar
    // graph is a valid r = 5 input.
    let graphs: Vec<(String, WeightedGraph, Vec<u32>)> = vec![
        ("path(17)".into(), graph::path(17), vec![3, 5]),
        ("star(9)".into(), graph::star(9), vec![3, 5]),
        ("tree(40)".into(), graph::tree(40, 9), vec![3, 5]),
        (
            "grid(5x7)".into(),
            graph::grid(5, 7, WeightRule::Seeded(3)),
            vec![5],
        ),
        (
            "planar(60)".into(),
            graph::random_planar_like(60, 4),
            vec![5],
        ),
        (
            "outerplanar(25)".into(),
            graph::outerplanar_like(25, 8),
            vec![4, 5],
        ),
    ];
    for (name, g, rs) in graphs {
        let diam = graph::diameter(&g).unwrap();
        for &r in &rs {
            for delta in [diam / 2.0, diam / 8.0] {
                if delta <= 0.0 {
                    continue;
                }
                let dec = build_decomposition_with(&g, r, delta, checked()).unwrap();
                for rep in [
                    verify_structure(&dec, &g),
                    verify_radius(&dec, &g),
                    verify_skeleton(&dec, &g),
                    verify_buffer(&dec, &g),
                    verify_tree_decomposition(&dec, &g),
                ] {
                    assert!(rep.is_clean(), "{name} r={r} delta={delta}: {rep}");
                }
            }
        }
    }
}

#[test]
fn decomposition_over_subgraph_view_reuses_ids() {
    let g = graph::grid(4, 4, WeightRule::Unit);
    // right half of the grid
    let members: Vec<u32> = (0..16).filter(|v| v % 4 >= 2).collect();
    let view = g.view(&members);
    let dec = build_decomposition(&view, 5, 2.0).unwrap();
    for &v in &members {
        assert_ne!(dec.assignment[v as usize], SupernodeId::MAX);
    }
    for v in (0..16u32).filter(|v| v % 4 < 2) {
        assert_eq!(dec.assignment[v as usize], SupernodeId::MAX);
    }
    let rep = verify_all(&dec, &view);
    assert!(rep.is_clean(), "{rep}");
}

#[test]
fn verifier_flags_a_corrupted_decomposition() {
    let g = graph::path(6);
    let mut dec = build_decomposition(&g, 3, 2.0).unwrap();
    // move one vertex into a far supernode: structure + radius must notice
    let last = dec.supernode_count() as SupernodeId - 1;
    dec.assignment[0] = last;
    dec.supernodes[0].vertices.retain(|&v| v != 0);
    dec.supernodes[last as usize].vertices.insert(0, 0);
    dec.supernodes[last as usize].vertices.sort_unstable();
    assert!(!verify_structure(&dec, &g).is_clean());
}

#[test]
fn dom_rejects_unknown_ids() {
    let g = graph::path(4);
    let dec = build_decomposition(&g, 3, 1.0).unwrap();
    let bad = dec.supernode_count() as SupernodeId + 3;
    assert_eq!(
        dec.dom_vertices(bad).unwrap_err(),
        DecompositionError::UnknownSupernode(bad)
    );
    assert!(dec.dom(&g, bad).is_err());
}

mod random_stress {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// Arbitrary radii (not just the corpus fractions) keep every
        /// guarantee intact on planar-like inputs at r = 5.
        #[test]
        fn planar_decomposition_verifies_at_any_radius(
            n in 4usize..=60,
            seed in any::<u64>(),
            frac in 0.02f64..1.5,
        ) {
            let g = graph::random_planar_like(n, seed);
            let diam = graph::diameter(&g).unwrap();
            let delta = (frac * diam).max(1e-3);
            let dec = build_decomposition_with(&g, 5, delta, checked()).unwrap();
            let rep = verify_all(&dec, &g);
            prop_assert!(rep.is_clean(), "n={n} seed={seed} delta={delta}: {rep}");
            let c = crate::shortcut::build_partition(&g, &dec);
            let prep = crate::shortcut::verify::verify_partition(&g, &dec, &c);
            prop_assert!(prep.is_clean(), "n={n} seed={seed} delta={delta}: {prep}");
        }

        /// Same for random trees at the tight parameter r = 3.
        #[test]
        fn tree_decomposition_verifies_at_any_radius(
            n in 2usize..=60,
            seed in any::<u64>(),
            frac in 0.02f64..1.5,
        ) {
            let g = graph::tree(n, seed);
            let diam = graph::diameter(&g).unwrap();
            let delta = (frac * diam).max(1e-3);
            let dec = build_decomposition_with(&g, 3, delta, checked()).unwrap();
            let rep = verify_all(&dec, &g);
            prop_assert!(rep.is_clean(), "n={n} seed={seed} delta={delta}: {rep}");
        }
    }
}

/// Evidence that the construction's deep paths actually execute on the
/// corpus families: multi-witness skeletons, buffer growth beyond the
/// skeleton, and non-trivial partition-tree depth.
#[test]
fn construction_exercises_every_mechanism() {
    let g = graph::random_planar_like(250, 106);
    let diam = graph::diameter(&g).unwrap();
    let dec = build_decomposition(&g, 5, diam / 6.0).unwrap();

    let multi_leaf = dec.supernodes.iter().any(|s| s.skeleton.leaf_count() >= 2);
    assert!(multi_leaf, "no skeleton ever connected two witnesses");

    let grew = dec
        .supernodes
        .iter()
        .any(|s| s.vertices.len() > s.skeleton.members().len());
    assert!(grew, "no supernode ever grew past its skeleton");

    let depth = dec.supernodes.iter().map(|s| s.depth).max().unwrap();
    assert!(
        depth >= 2,
        "partition tree unexpectedly flat (depth {depth})"
    );
}

//! End-to-end checks of the command-line surface: golden artifacts,
//! exit codes, and flag validation.

use copse_core::artifact::{self, KIND_DECOMPOSITION};
use copse_core::CopDecomposition;
use std::fs;
use std::path::{Path, PathBuf};

fn write_path5(dir: &Path) -> PathBuf {
    let p = dir.join("path5.txt");
    fs::write(&p, "5 4\n0 1 1.0\n1 2 1.0\n2 3 1.0\n3 4 1.0\n").unwrap();
    p
}

fn run(args: &[&str]) -> u8 {
    let mut v = vec!["copse".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    copse_cli::run(v)
}

/// `decompose --r 3 --delta 10` on the unit 5-path must reproduce the
/// golden decomposition: root supernode {0}, child {1, 2, 3, 4}.
#[test]
fn golden_decompose_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_path5(dir.path());
    let out = dir.path().join("out");
    let code = run(&[
        "decompose",
        "--input",
        input.to_str().unwrap(),
        "--r",
        "3",
        "--delta",
        "10",
        "--out",
        out.to_str().unwrap(),
        "--verify",
        "exhaustive",
    ]);
    assert_eq!(code, 0);

    let text = fs::read_to_string(out.join("decomposition.json")).unwrap();
    let dec: CopDecomposition = artifact::from_json(KIND_DECOMPOSITION, &text).unwrap();
    assert_eq!(dec.supernode_count(), 2);
    assert_eq!(dec.supernode(0).unwrap().vertices, vec![0]);
    assert_eq!(dec.supernode(1).unwrap().vertices, vec![1, 2, 3, 4]);
    assert_eq!(dec.assignment[..5], [0, 1, 1, 1, 1]);

    // and it matches an in-process build exactly
    let g = copse_core::load_edge_list("5 4\n0 1 1.0\n1 2 1.0\n2 3 1.0\n3 4 1.0\n").unwrap();
    let direct = copse_core::build_decomposition(&g, 3, 10.0).unwrap();
    assert_eq!(dec, direct);
}

#[test]
fn verify_exhaustive_is_clean_on_path5() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_path5(dir.path());
    let out = dir.path().join("out");
    let code = run(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--r",
        "3",
        "--delta",
        "10",
        "--verify",
        "exhaustive",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.join("verify-report.json").exists());
    assert!(out.join("samples.csv").exists());
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_path5(dir.path());
    let input = input.to_str().unwrap();

    // missing --delta / --epsilon
    assert_eq!(run(&["decompose", "--input", input, "--r", "3"]), 64);
    // both at once
    assert_eq!(
        run(&[
            "decompose",
            "--input",
            input,
            "--r",
            "3",
            "--delta",
            "1",
            "--epsilon",
            "0.5",
        ]),
        64
    );
    // r below 3
    assert_eq!(
        run(&["decompose", "--input", input, "--r", "2", "--delta", "1"]),
        64
    );
    // treecover without epsilon
    assert_eq!(run(&["treecover", "--input", input]), 64);
    // spr without terminals
    assert_eq!(run(&["spr", "--input", input]), 64);
    // epsilon out of range
    assert_eq!(
        run(&["treecover", "--input", input, "--epsilon", "1.5"]),
        64
    );
    // unknown flag (clap-level)
    assert_eq!(run(&["decompose", "--input", input, "--bogus"]), 64);
}

#[test]
fn data_errors_exit_65() {
    let dir = tempfile::tempdir().unwrap();
    // missing file
    assert_eq!(
        run(&[
            "decompose",
            "--input",
            "/definitely/not/here",
            "--r",
            "3",
            "--delta",
            "1"
        ]),
        65
    );
    // malformed weight
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "2 1\n0 1 0.0\n").unwrap();
    assert_eq!(
        run(&[
            "decompose",
            "--input",
            bad.to_str().unwrap(),
            "--r",
            "3",
            "--delta",
            "1"
        ]),
        65
    );
    // disconnected input
    let split = dir.path().join("split.txt");
    fs::write(&split, "4 2\n0 1 1.0\n2 3 1.0\n").unwrap();
    assert_eq!(
        run(&[
            "decompose",
            "--input",
            split.to_str().unwrap(),
            "--r",
            "3",
            "--delta",
            "1"
        ]),
        65
    );
}

#[test]
fn oracle_query_round_trips_through_saved_cover() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_path5(dir.path());
    let input = input.to_str().unwrap();
    let out = dir.path().join("out");
    assert_eq!(
        run(&[
            "oracle",
            "build",
            "--input",
            input,
            "--epsilon",
            "0.5",
            "--r",
            "3",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    let cover = out.join("cover.json");
    assert!(cover.exists());
    assert_eq!(
        run(&[
            "oracle",
            "query",
            "--input",
            input,
            "--cover",
            cover.to_str().unwrap(),
            "0",
            "4",
        ]),
        0
    );
}

#[test]
fn terminals_accept_json_and_plain_lists() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_path5(dir.path());
    let input = input.to_str().unwrap();
    let json = dir.path().join("k.json");
    fs::write(&json, "[0, 4]").unwrap();
    let out1 = dir.path().join("o1");
    assert_eq!(
        run(&[
            "spr",
            "--input",
            input,
            "--r",
            "3",
            "--terminals",
            json.to_str().unwrap(),
            "--out",
            out1.to_str().unwrap(),
        ]),
        0
    );
    let plain = dir.path().join("k.txt");
    fs::write(&plain, "0\n4\n").unwrap();
    let out2 = dir.path().join("o2");
    assert_eq!(
        run(&[
            "spr",
            "--input",
            input,
            "--r",
            "3",
            "--terminals",
            plain.to_str().unwrap(),
            "--out",
            out2.to_str().unwrap(),
        ]),
        0
    );
    assert_eq!(
        fs::read(out1.join("minor.json")).unwrap(),
        fs::read(out2.join("minor.json")).unwrap()
    );
}

#[test]
fn format_flag_adds_csv_and_dot_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_path5(dir.path());
    let input = input.to_str().unwrap();

    let out = dir.path().join("csv");
    assert_eq!(
        run(&[
            "partition",
            "--input",
            input,
            "--r",
            "3",
            "--delta",
            "2",
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    let owners = fs::read_to_string(out.join("owners.csv")).unwrap();
    assert!(owners.starts_with("vertex,cluster,supernode\n"));
    assert_eq!(owners.lines().count(), 6);

    let out = dir.path().join("dot");
    assert_eq!(
        run(&[
            "decompose",
            "--input",
            input,
            "--r",
            "3",
            "--delta",
            "2",
            "--format",
            "dot",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    assert!(fs::read_to_string(out.join("decomposition.dot"))
        .unwrap()
        .starts_with("graph {"));

    let out = dir.path().join("scales");
    assert_eq!(
        run(&[
            "treecover",
            "--input",
            input,
            "--r",
            "3",
            "--epsilon",
            "0.5",
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    assert!(out.join("scales.csv").exists());
}

/// Frozen golden artifacts: schema-versioned JSON must stay byte-stable
/// across refactors, not just across runs.
#[test]
fn golden_artifacts_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_path5(dir.path());
    let input = input.to_str().unwrap();

    let out = dir.path().join("dec");
    assert_eq!(
        run(&[
            "decompose",
            "--input",
            input,
            "--r",
            "3",
            "--delta",
            "10",
            "--out",
            out.to_str().unwrap(),
            "--verify",
            "off",
        ]),
        0
    );
    assert_eq!(
        fs::read_to_string(out.join("decomposition.json")).unwrap(),
        include_str!("golden/path5-decomposition.json"),
        "decomposition artifact drifted from the golden file"
    );

    let out = dir.path().join("clu");
    assert_eq!(
        run(&[
            "partition",
            "--input",
            input,
            "--r",
            "3",
            "--delta",
            "10",
            "--out",
            out.to_str().unwrap(),
            "--verify",
            "off",
        ]),
        0
    );
    assert_eq!(
        fs::read_to_string(out.join("clustering.json")).unwrap(),
        include_str!("golden/path5-clustering.json"),
        "clustering artifact drifted from the golden file"
    );
}

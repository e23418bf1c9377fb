//! Command implementations. Every command loads the edge list, builds
//! its stage, writes deterministic artifacts into `--out`, runs the
//! requested verification level, and reports one line per verifier.

use crate::config::{Format, OracleAction, StageArgs, VerifyLevel};
use crate::Command;
use copse_core::artifact::{self, KIND_CLUSTERING, KIND_COVER, KIND_DECOMPOSITION, KIND_MINOR};
use copse_core::copdecomp::verify as dverify;
use copse_core::scatter::spr;
use copse_core::shortcut::verify::{verify_partition, verify_shortcut, PairSample, ShortcutReport};
use copse_core::treecover::{verify_cover, verify_cover_sampled, CoverReport};
use copse_core::{
    build_decomposition, build_partition, build_tree_cover, diameter, graph, load_edge_list,
    CopDecomposition, Oracle, Report, TreeCover, Vertex, WeightedGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fs;
use std::path::Path;

#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Data(String),
}

fn usage(msg: impl Into<String>) -> CmdError {
    CmdError::Usage(msg.into())
}

fn data(msg: impl std::fmt::Display) -> CmdError {
    CmdError::Data(msg.to_string())
}

pub fn dispatch(cli: crate::Cli) -> Result<bool, CmdError> {
    match cli.command {
        Command::Decompose(args) => cmd_decompose(&args),
        Command::Partition(args) => cmd_partition(&args),
        Command::Spr(args) => cmd_spr(&args),
        Command::Treecover(args) => cmd_treecover(&args),
        Command::Oracle { action } => cmd_oracle(action),
        Command::Verify(args) => cmd_verify(&args),
    }
}

fn load_graph(args: &StageArgs) -> Result<WeightedGraph, CmdError> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| data(format!("{}: {e}", args.input.display())))?;
    load_edge_list(&text).map_err(|e| data(format!("{}: {e}", args.input.display())))
}

fn load_terminals(path: &Path) -> Result<Vec<Vertex>, CmdError> {
    let text = fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| data(format!("{}: {e}", path.display())))
    } else {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.parse::<Vertex>()
                    .map_err(|_| data(format!("{}: bad terminal id `{l}`", path.display())))
            })
            .collect()
    }
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<(), CmdError> {
    fs::create_dir_all(dir).map_err(|e| data(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| data(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// Exactly one of `--delta` / `--epsilon`; epsilon translates to the
/// radius `epsilon * diam / 4` that keeps cluster strong diameter within
/// `epsilon * diam`.
fn resolve_delta(g: &WeightedGraph, args: &StageArgs) -> Result<f64, CmdError> {
    match (args.delta, args.epsilon) {
        (Some(d), None) => {
            if d > 0.0 {
                Ok(d)
            } else {
                Err(usage(format!("--delta must be positive, got {d}")))
            }
        }
        (None, Some(e)) => {
            check_epsilon(e)?;
            let diam = diameter(g).map_err(data)?;
            Ok(e * diam / 4.0)
        }
        (None, None) => Err(usage("exactly one of --delta / --epsilon is required")),
        (Some(_), Some(_)) => Err(usage("--delta and --epsilon are mutually exclusive")),
    }
}

fn check_epsilon(e: f64) -> Result<f64, CmdError> {
    if e > 0.0 && e < 1.0 {
        Ok(e)
    } else {
        Err(usage(format!("--epsilon must lie in (0, 1), got {e}")))
    }
}

fn require_epsilon(args: &StageArgs) -> Result<f64, CmdError> {
    if args.delta.is_some() {
        return Err(usage("this command takes --epsilon, not --delta"));
    }
    args.epsilon
        .map(check_epsilon)
        .transpose()?
        .ok_or_else(|| usage("--epsilon is required"))
}

fn check_r(args: &StageArgs) -> Result<(), CmdError> {
    if args.r < 3 {
        Err(usage(format!("--r must be at least 3, got {}", args.r)))
    } else {
        Ok(())
    }
}

fn print_report(rep: &Report) -> bool {
    println!("{rep}");
    rep.is_clean()
}

/// Pair sample for the shortcut audit at the chosen level, honoring the
/// exhaustive-to-sampled downgrade above 1000 vertices.
fn shortcut_sample(level: VerifyLevel, n: usize, seed: u64) -> PairSample {
    match level {
        VerifyLevel::Exhaustive if n <= 1000 => PairSample::All,
        VerifyLevel::Exhaustive => {
            eprintln!("warning: n = {n} > 1000, exhaustive pair audit downgraded to sampled");
            PairSample::Random { seed, count: 2000 }
        }
        _ => PairSample::Random { seed, count: 2000 },
    }
}

#[derive(Serialize)]
struct StageSummary<'a> {
    stage: &'a str,
    reports: Vec<&'a Report>,
    stats: serde_json::Value,
}

fn cmd_decompose(args: &StageArgs) -> Result<bool, CmdError> {
    check_r(args)?;
    let g = load_graph(args)?;
    let delta = resolve_delta(&g, args)?;
    let dec = build_decomposition(&g, args.r, delta).map_err(data)?;
    write_out(
        &args.out,
        "decomposition.json",
        &artifact::to_json(KIND_DECOMPOSITION, &dec),
    )?;
    match args.format {
        Format::Dot => {
            let dot = graph::to_dot(&g, |v| Some(dec.owner(v) as usize));
            write_out(&args.out, "decomposition.dot", &dot)?;
        }
        Format::Csv => {
            let mut csv = String::from("vertex,supernode\n");
            for v in 0..g.vertex_count() as Vertex {
                csv.push_str(&format!("{v},{}\n", dec.owner(v)));
            }
            write_out(&args.out, "assignment.csv", &csv)?;
        }
        Format::Json => {}
    }
    println!(
        "decomposition: {} supernodes, delta = {delta}, r = {}",
        dec.supernode_count(),
        args.r
    );
    if args.verify == VerifyLevel::Off {
        return Ok(true);
    }
    let reports = decomposition_reports(&dec, &g);
    let clean = reports.iter().all(Report::is_clean);
    for r in &reports {
        print_report(r);
    }
    let summary = StageSummary {
        stage: "decompose",
        reports: reports.iter().collect(),
        stats: serde_json::json!(dverify::stats(&dec)),
    };
    write_out(
        &args.out,
        "decompose-report.json",
        &artifact::to_json(artifact::KIND_REPORT, &summary),
    )?;
    Ok(clean)
}

fn decomposition_reports(dec: &CopDecomposition, g: &WeightedGraph) -> Vec<Report> {
    vec![
        dverify::verify_structure(dec, g),
        dverify::verify_radius(dec, g),
        dverify::verify_skeleton(dec, g),
        dverify::verify_buffer(dec, g),
        dverify::verify_tree_decomposition(dec, g),
    ]
}

fn cmd_partition(args: &StageArgs) -> Result<bool, CmdError> {
    check_r(args)?;
    let g = load_graph(args)?;
    let delta = resolve_delta(&g, args)?;
    let dec = build_decomposition(&g, args.r, delta).map_err(data)?;
    let clustering = build_partition(&g, &dec);
    write_out(
        &args.out,
        "decomposition.json",
        &artifact::to_json(KIND_DECOMPOSITION, &dec),
    )?;
    write_out(
        &args.out,
        "clustering.json",
        &artifact::to_json(KIND_CLUSTERING, &clustering),
    )?;
    match args.format {
        Format::Dot => {
            let dot = graph::to_dot(&g, |v| clustering.owner_of(v).map(|c| c as usize));
            write_out(&args.out, "clustering.dot", &dot)?;
        }
        Format::Csv => {
            let mut csv = String::from("vertex,cluster,supernode\n");
            for v in 0..g.vertex_count() as Vertex {
                let c = clustering.owner_of(v).expect("partition is total");
                csv.push_str(&format!("{v},{c},{}\n", dec.owner(v)));
            }
            write_out(&args.out, "owners.csv", &csv)?;
        }
        Format::Json => {}
    }
    println!(
        "partition: {} clusters over {} supernodes, strong diameter bound {}",
        clustering.cluster_count(),
        dec.supernode_count(),
        clustering.diameter_bound()
    );
    if args.verify == VerifyLevel::Off {
        return Ok(true);
    }
    let mut reports = decomposition_reports(&dec, &g);
    reports.push(verify_partition(&g, &dec, &clustering));
    let sample = shortcut_sample(args.verify, g.vertex_count(), args.seed);
    let audit = verify_shortcut(&g, &dec, &clustering, sample, None);
    write_out(&args.out, "samples.csv", &audit.to_csv())?;
    print_shortcut(&audit);
    let clean = reports.iter().all(Report::is_clean) && audit.is_clean();
    for r in &reports {
        print_report(r);
    }
    let summary = StageSummary {
        stage: "partition",
        reports: reports.iter().chain([&audit.report]).collect(),
        stats: serde_json::json!({
            "clusters": clustering.cluster_count(),
            "short_path_max_cost": audit.short_path_max_cost,
            "max_cost_per_unit": audit.max_cost_per_unit,
            "ceiling": audit.ceiling,
        }),
    };
    write_out(
        &args.out,
        "partition-report.json",
        &artifact::to_json(artifact::KIND_REPORT, &summary),
    )?;
    Ok(clean)
}

fn print_shortcut(audit: &ShortcutReport) {
    match audit.short_path_max_cost {
        Some(c) => println!(
            "shortcut audit: short-path max cost {c} (ceiling {}), per-unit max {:.3}",
            audit.ceiling, audit.max_cost_per_unit
        ),
        None => println!(
            "shortcut audit: no short pairs sampled, per-unit max {:.3}",
            audit.max_cost_per_unit
        ),
    }
}

fn cmd_spr(args: &StageArgs) -> Result<bool, CmdError> {
    check_r(args)?;
    if args.delta.is_some() || args.epsilon.is_some() {
        return Err(usage(
            "spr derives its scales from --zeta; drop --delta/--epsilon",
        ));
    }
    let terminals_path = args
        .terminals
        .as_ref()
        .ok_or_else(|| usage("--terminals is required"))?;
    let g = load_graph(args)?;
    let terminals = load_terminals(terminals_path)?;
    let params = spr::SprParams {
        zeta: args.zeta,
        r: args.r,
    };
    let tm = spr::solve(&g, &terminals, params).map_err(data)?;
    write_out(&args.out, "minor.json", &artifact::to_json(KIND_MINOR, &tm))?;
    write_out(
        &args.out,
        "minor-edges.txt",
        &copse_core::save_edge_list(&tm.minor_graph()),
    )?;
    println!(
        "spr: {} terminals, {} minor edges, {} iterations",
        tm.terminals.len(),
        tm.edges.len(),
        tm.trace.len()
    );
    if args.verify == VerifyLevel::Off {
        return Ok(true);
    }
    let rep = spr::verify_minor(&tm, &g);
    println!(
        "distortion: max {:.4}, min {:.4}; vertex ratio max {:.4} (bound {:.1})",
        rep.max_distortion, rep.min_distortion, rep.max_vertex_ratio, rep.vertex_ratio_bound
    );
    let clean = print_report(&rep.report);
    let summary = StageSummary {
        stage: "spr",
        reports: vec![&rep.report],
        stats: serde_json::json!({
            "max_distortion": rep.max_distortion,
            "min_distortion": rep.min_distortion,
            "max_vertex_ratio": rep.max_vertex_ratio,
            "tau_hat": rep.tau_hat,
        }),
    };
    write_out(
        &args.out,
        "spr-report.json",
        &artifact::to_json(artifact::KIND_REPORT, &summary),
    )?;
    Ok(clean)
}

fn cmd_treecover(args: &StageArgs) -> Result<bool, CmdError> {
    check_r(args)?;
    let eps = require_epsilon(args)?;
    let g = load_graph(args)?;
    let tc = build_tree_cover(&g, eps, args.r).map_err(data)?;
    write_out(&args.out, "cover.json", &artifact::to_json(KIND_COVER, &tc))?;
    if args.format == Format::Csv {
        let mut csv = String::from("scale,trees\n");
        for (scale, count) in tc.scale_profile() {
            csv.push_str(&format!("{scale},{count}\n"));
        }
        write_out(&args.out, "scales.csv", &csv)?;
    }
    println!(
        "tree cover: {} trees over scales {}..={}, per-scale {:?}",
        tc.tree_count(),
        tc.scale_lo,
        tc.scale_hi,
        tc.scale_profile()
    );
    if args.verify == VerifyLevel::Off {
        return Ok(true);
    }
    let rep = cover_report(&tc, &g, args.verify, args.seed);
    println!(
        "cover audit: max stretch {:.4} (budget {}), {} uncovered, {} dominance violations",
        rep.max_stretch,
        1.0 + eps,
        rep.uncovered_pairs,
        rep.dominance_violations
    );
    let mut clean = print_report(&rep.report);
    if rep.max_stretch > 1.0 + eps {
        eprintln!("stretch exceeds 1 + epsilon");
        clean = false;
    }
    let summary = StageSummary {
        stage: "treecover",
        reports: vec![&rep.report],
        stats: serde_json::json!({
            "max_stretch": rep.max_stretch,
            "tree_count": rep.tree_count,
            "forest_count": rep.forest_count,
            "trees_per_scale": rep.trees_per_scale,
        }),
    };
    write_out(
        &args.out,
        "treecover-report.json",
        &artifact::to_json(artifact::KIND_REPORT, &summary),
    )?;
    Ok(clean)
}

fn cover_report(tc: &TreeCover, g: &WeightedGraph, level: VerifyLevel, seed: u64) -> CoverReport {
    match level {
        VerifyLevel::Exhaustive if g.vertex_count() <= 1000 => verify_cover(tc, g),
        VerifyLevel::Exhaustive => {
            eprintln!(
                "warning: n = {} > 1000, exhaustive cover audit downgraded to sampled",
                g.vertex_count()
            );
            verify_cover_sampled(tc, g, seed, 2000)
        }
        _ => verify_cover_sampled(tc, g, seed, 2000),
    }
}

fn build_or_load_cover(
    args: &StageArgs,
    cover: &Option<std::path::PathBuf>,
) -> Result<(WeightedGraph, TreeCover), CmdError> {
    let g = load_graph(args)?;
    let tc = match cover {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
            artifact::from_json(KIND_COVER, &text).map_err(data)?
        }
        None => {
            let eps = require_epsilon(args)?;
            check_r(args)?;
            build_tree_cover(&g, eps, args.r).map_err(data)?
        }
    };
    Ok((g, tc))
}

fn cmd_oracle(action: OracleAction) -> Result<bool, CmdError> {
    match action {
        OracleAction::Build(args) => {
            let eps = require_epsilon(&args)?;
            check_r(&args)?;
            let g = load_graph(&args)?;
            let tc = build_tree_cover(&g, eps, args.r).map_err(data)?;
            let oracle = Oracle::from_cover(&tc).map_err(data)?;
            write_out(&args.out, "cover.json", &artifact::to_json(KIND_COVER, &tc))?;
            write_out(
                &args.out,
                "oracle-stats.json",
                &artifact::to_json(artifact::KIND_REPORT, &oracle.size_stats()),
            )?;
            println!(
                "oracle: {} trees, {} words",
                oracle.tree_count(),
                oracle.size_stats().total_words
            );
            Ok(true)
        }
        OracleAction::Query { stage, u, v, cover } => {
            let (_, tc) = build_or_load_cover(&stage, &cover)?;
            let oracle = Oracle::from_cover(&tc).map_err(data)?;
            let d = oracle.query(u, v).map_err(data)?;
            println!("{d}");
            Ok(true)
        }
        OracleAction::Bench {
            stage,
            count,
            cover,
        } => {
            let (g, tc) = build_or_load_cover(&stage, &cover)?;
            let oracle = Oracle::from_cover(&tc).map_err(data)?;
            let n = g.vertex_count() as Vertex;
            let mut rng = ChaCha8Rng::seed_from_u64(stage.seed);
            let pairs: Vec<(Vertex, Vertex)> = (0..count)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect();
            let bench = copse_core::bench(&oracle, &pairs).map_err(data)?;
            // deterministic answers and the wall clock land in separate
            // artifacts so repeated runs stay byte-identical
            #[derive(Serialize)]
            struct Answers<'a> {
                queries: usize,
                trees_probed_total: usize,
                size: copse_core::oracle::SizeStats,
                answers: &'a [f64],
            }
            write_out(
                &stage.out,
                "bench-answers.json",
                &artifact::to_json(
                    artifact::KIND_REPORT,
                    &Answers {
                        queries: bench.queries,
                        trees_probed_total: bench.trees_probed_total,
                        size: bench.size,
                        answers: &bench.answers,
                    },
                ),
            )?;
            println!(
                "bench: {} queries in {} ns ({:.1} ns/query), {} trees probed, {} words",
                bench.queries,
                bench.wall_nanos,
                bench.wall_nanos as f64 / bench.queries.max(1) as f64,
                bench.trees_probed_total,
                bench.size.total_words
            );
            Ok(true)
        }
    }
}

fn cmd_verify(args: &StageArgs) -> Result<bool, CmdError> {
    check_r(args)?;
    let g = load_graph(args)?;
    let level = if args.verify == VerifyLevel::Off {
        VerifyLevel::Sampled
    } else {
        args.verify
    };
    let delta = resolve_delta(&g, args)?;
    let mut all_reports: Vec<Report> = Vec::new();

    let dec = build_decomposition(&g, args.r, delta).map_err(data)?;
    all_reports.extend(decomposition_reports(&dec, &g));
    let clustering = build_partition(&g, &dec);
    all_reports.push(verify_partition(&g, &dec, &clustering));
    let audit = verify_shortcut(
        &g,
        &dec,
        &clustering,
        shortcut_sample(level, g.vertex_count(), args.seed),
        None,
    );
    print_shortcut(&audit);
    all_reports.push(audit.report.clone());
    write_out(&args.out, "samples.csv", &audit.to_csv())?;

    if let Some(eps) = args.epsilon {
        let tc = build_tree_cover(&g, eps, args.r).map_err(data)?;
        let rep = cover_report(&tc, &g, level, args.seed);
        println!(
            "cover audit: max stretch {:.4}, {} trees",
            rep.max_stretch, rep.tree_count
        );
        let mut cover_rep = rep.report.clone();
        if rep.max_stretch > 1.0 + eps {
            cover_rep.violation(format!(
                "max stretch {} exceeds 1 + epsilon = {}",
                rep.max_stretch,
                1.0 + eps
            ));
        }
        all_reports.push(cover_rep);

        // oracle answers must equal the cover's min-tree distance
        let oracle = Oracle::from_cover(&tc).map_err(data)?;
        let mut cross = Report::new("oracle-cross-check");
        let n = g.vertex_count() as Vertex;
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        for _ in 0..10_000usize {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let fast = oracle.query(u, v).map_err(data)?;
            let slow = oracle.query_by_walking(u, v).map_err(data)?;
            if fast != slow {
                cross.violation(format!("query({u}, {v}) = {fast}, tree-path walk {slow}"));
            }
        }
        all_reports.push(cross);
    }

    if let Some(path) = &args.terminals {
        let terminals = load_terminals(path)?;
        let tm = spr::solve(
            &g,
            &terminals,
            spr::SprParams {
                zeta: args.zeta,
                r: args.r,
            },
        )
        .map_err(data)?;
        let rep = spr::verify_minor(&tm, &g);
        println!(
            "spr distortion: max {:.4}, min {:.4}",
            rep.max_distortion, rep.min_distortion
        );
        all_reports.push(rep.report);
    }

    let clean = all_reports.iter().all(Report::is_clean);
    for r in &all_reports {
        print_report(r);
    }
    let summary = StageSummary {
        stage: "verify",
        reports: all_reports.iter().collect(),
        stats: serde_json::json!({"level": format!("{level:?}")}),
    };
    write_out(
        &args.out,
        "verify-report.json",
        &artifact::to_json(artifact::KIND_REPORT, &summary),
    )?;
    Ok(clean)
}

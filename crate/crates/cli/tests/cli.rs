use std::fs;
use std::path::Path;
use std::process::Command;

use netgame::cli::{OutArgs, VerifyArgs};
use netgame::commands::{verify_with, Outcome};
use netgame::{edgelist, run, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use netgame_core::closed_form::ClosedForms;
use netgame_core::Graph;

fn netgame(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("netgame").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn two_expensive_players_stay_apart() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = netgame(&["simulate", "--n", "2", "--gamma", "0.6", "--out-dir", path_arg(dir.path())]);
    assert_eq!(code, EXIT_OK, "{stdout}");
    let g = edgelist::read(&dir.path().join("graph.edgelist")).unwrap();
    assert_eq!(g, Graph::new_empty(2).unwrap());
    let metrics = fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    let row = metrics.lines().last().unwrap();
    assert!(row.contains(",true,true,"), "{row}");
    assert_eq!(row.split(',').nth(9), Some("0"));
}

#[test]
fn simulated_graph_round_trips_through_stability_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = path_arg(dir.path());
    let common = ["--n", "12", "--alpha", "0.04", "--gamma", "0.2", "--seed", "3"];
    let mut args = vec!["simulate", "--out-dir", out];
    args.extend(common);
    let (code, stdout) = netgame(&args);
    assert_eq!(code, EXIT_OK, "{stdout}");
    for name in ["graph.edgelist", "graph.dot", "graph.graphml", "payoffs.csv", "metrics.csv", "events.log"] {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.contains("seed = 3"), "{name} lacks the config echo");
    }
    assert!(!dir.path().join("hubs.csv").exists());

    let graph = dir.path().join("graph.edgelist");
    let mut args = vec!["stability-check", path_arg(&graph)];
    args.extend(&common[2..]);
    assert_eq!(netgame(&args), (EXIT_OK, "stable\n".to_string()));
}

#[test]
fn same_seed_same_bytes() {
    let read = |dir: &Path, name: &str| fs::read(dir.join(name)).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let args = ["simulate", "--experiment", "incentivized", "--n", "25", "--alpha", "0.03", "--seed", "9"];
        let mut args = args.to_vec();
        args.extend(["--out-dir", path_arg(dir.path())]);
        netgame(&args);
    }
    for name in ["graph.edgelist", "events.log", "metrics.csv", "hubs.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
}

#[test]
fn several_seeds_get_their_own_directories() {
    let dir = tempfile::tempdir().unwrap();
    let (_, stdout) = netgame(&[
        "simulate", "--n", "6", "--alpha", "0.1", "--gamma", "0.1", "--seed", "4", "--seeds", "3",
        "--format", "edgelist", "--event-log", "none", "--out-dir", path_arg(dir.path()),
    ]);
    assert_eq!(stdout.lines().count(), 3);
    for seed in 4..7 {
        let sub = dir.path().join(format!("seed-{seed}"));
        assert!(sub.join("graph.edgelist").exists());
        assert!(!sub.join("graph.dot").exists());
        assert!(!sub.join("events.log").exists());
    }
    let metrics = fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert_eq!(metrics.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn stability_check_examples() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = dir.path().join("k5.txt");
    fs::write(&k5, edgelist::render(&Graph::complete(5).unwrap(), &[])).unwrap();
    let s5 = dir.path().join("s5.txt");
    fs::write(&s5, edgelist::render(&Graph::star(5).unwrap(), &[])).unwrap();

    let (code, _) = netgame(&["stability-check", path_arg(&k5), "--alpha", "0.1", "--gamma", "0.1"]);
    assert_eq!(code, EXIT_OK);
    let (code, stdout) = netgame(&["stability-check", path_arg(&k5), "--alpha", "0.1", "--gamma", "0.12"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert!(stdout.starts_with("unstable: delete (1, 2)"), "{stdout}");

    let (code, stdout) = netgame(&["stability-check", path_arg(&s5), "--alpha", "0.1", "--delta", "0.6"]);
    assert_eq!(code, EXIT_NEGATIVE);
    let deltas = stdout.split("deltas (").nth(1).unwrap();
    let leaf_gain: f64 = deltas.split(", ").nth(1).unwrap().trim_end_matches(")\n").parse().unwrap();
    assert!(stdout.contains("delete (1, 2)") && leaf_gain > 0.0, "{stdout}");

    let (code, _) = netgame(&[
        "stability-check", path_arg(&s5), "--alpha", "0.1", "--delta", "0.3", "--zeta", "0.2",
        "--incentivized-count", "1",
    ]);
    assert_eq!(code, EXIT_OK);

    let (_, stdout) = netgame(&[
        "stability-check", path_arg(&s5), "--alpha", "0.1", "--delta", "0.3", "--zeta", "0.35",
        "--incentivized-count", "1",
    ]);
    assert!(stdout.contains("note: incentivized_cost 0.35 exceeds cost 0.3"), "{stdout}");
}

#[test]
fn malformed_inputs_exit_with_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "n 3\n1 2\n2 2\n").unwrap();
    assert_eq!(netgame(&["stability-check", path_arg(&bad), "--alpha", "0.1"]).0, EXIT_USAGE);
    assert_eq!(netgame(&["simulate", "--no-such-flag"]).0, EXIT_USAGE);
    assert_eq!(netgame(&["simulate", "--n", "10", "--alpha", "0.5"]).0, EXIT_USAGE);
    assert_eq!(netgame(&["simulate", "--gamma", "0.1", "--delta", "0.2"]).0, EXIT_USAGE);
    assert_eq!(netgame(&["sweep", "--zeta", "0.3:0.1:0.05", "--incentivized-count", "2"]).0, EXIT_USAGE);
}

#[test]
fn config_file_sits_between_preset_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small incentivized game\nn = 15\nalpha = 0.05\nzeta = 0.12\nevent_log = none\n").unwrap();
    let (code, stdout) = netgame(&[
        "simulate", "--experiment", "incentivized", "--config", path_arg(&cfg), "--incentivized-count", "2",
        "--out-dir", path_arg(dir.path()),
    ]);
    assert_ne!(code, EXIT_USAGE, "{stdout}");
    let hubs = fs::read_to_string(dir.path().join("hubs.csv")).unwrap();
    for line in ["# n = 15", "# alpha = 0.05", "# incentivized_count = 2", "# incentivized_cost = 0.12", "# cost = 0.25"] {
        assert!(hubs.contains(line), "missing {line:?}");
    }
    assert_eq!(hubs.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count(), 2);
    assert!(!dir.path().join("events.log").exists());

    fs::write(&cfg, "n = 15\nalpha = nope\n").unwrap();
    assert_eq!(netgame(&["simulate", "--config", path_arg(&cfg)]).0, EXIT_USAGE);
}

#[test]
fn out_dir_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_netgame"))
        .args(["simulate", "--n", "3", "--alpha", "0.1", "--gamma", "0.1"])
        .env("NETGAME_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(EXIT_OK));
    let g = edgelist::read(&dir.path().join("graph.edgelist")).unwrap();
    assert_eq!(g, Graph::complete(3).unwrap());
}

fn verify_args(n: &str, dir: &Path) -> VerifyArgs {
    VerifyArgs {
        n: n.into(),
        alpha_scale: "0.25,0.5,0.75".into(),
        alpha: Some("0.1,0.6".into()),
        out: OutArgs {
            out_dir: Some(dir.to_path_buf()),
        },
    }
}

#[test]
fn verify_passes_and_marks_infeasible_points() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = netgame(&["verify", "--n", "3:12", "--alpha", "0.1,0.6", "--out-dir", path_arg(dir.path())]);
    assert_eq!(code, EXIT_OK, "{stdout}");
    let csv = fs::read_to_string(dir.path().join("verification.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("complete_threshold,4,0.6,") && l.contains(",skipped,")));
    assert!(csv.lines().any(|l| l.starts_with("nearly_complete_kb_unnormalized,") && l.contains(",info,")));
    assert!(!csv.contains(",fail,"));
}

#[test]
fn verify_rejects_a_corrupted_formula() {
    fn broken_star(n: usize, alpha: f64) -> netgame_core::Result<(f64, f64)> {
        let (hub, leaf) = netgame_core::closed_form::star_scaled(n, alpha)?;
        Ok((hub * (1.0 + 1e-6), leaf))
    }
    let dir = tempfile::tempdir().unwrap();
    let forms = ClosedForms {
        star_scaled: broken_star,
        ..ClosedForms::default()
    };
    let mut out = Vec::new();
    let outcome = verify_with(&verify_args("3:10", dir.path()), &forms, &mut out).unwrap();
    assert_eq!(outcome, Outcome::Negative);
    assert!(String::from_utf8(out).unwrap().contains("FAIL star_kb"));
    let healthy = verify_with(&verify_args("3:10", dir.path()), &ClosedForms::default(), &mut Vec::new()).unwrap();
    assert_eq!(healthy, Outcome::Success);
}

#[test]
fn verify_rejects_an_infeasible_grid() {
    assert_eq!(netgame(&["verify", "--n", "3:5", "--alpha-scale", "3"]).0, EXIT_USAGE);
    assert_eq!(netgame(&["verify", "--n", "9:3"]).0, EXIT_USAGE);
}

#[test]
fn sweep_writes_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = netgame(&[
        "sweep", "--n", "8", "--alpha", "0.05", "--gamma", "0.1", "--seeds", "1", "--out-dir", path_arg(dir.path()),
    ]);
    assert_eq!(code, EXIT_OK, "{stdout}");
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("n,alpha,cost,zeta"));

    let (_, stdout) = netgame(&[
        "sweep", "--n", "20", "--alpha", "0.03", "--incentivized-count", "3", "--zeta", "0.05,0.15", "--delta", "0.25",
        "--seeds", "2", "--jobs", "2", "--out-dir", path_arg(dir.path()),
    ]);
    assert!(stdout.contains("incentivized median payoff"), "{stdout}");
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.starts_with("20,")).count(), 4);
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn iabc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iabc")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn generate(dir: &Path, family: &str, n: &str) -> String {
    let path = dir.join(format!("{family}{n}.g"));
    let out = iabc(&["generate", "--family", family, "--n", n, "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    path.to_str().unwrap().to_string()
}

fn edge_lines(path: &str) -> usize {
    fs::read_to_string(path).unwrap().lines().filter(|l| l.starts_with("edge ")).count()
}

#[test]
fn generated_families_have_expected_edge_counts() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(edge_lines(&generate(dir.path(), "density", "8")), 32);
    assert_eq!(edge_lines(&generate(dir.path(), "complete", "4")), 16);
    // Six cycle edges and six hub edges, both directions, plus seven self-loops.
    assert_eq!(edge_lines(&generate(dir.path(), "fig2", "7")), 31);
}

#[test]
fn generation_is_deterministic_and_leaves_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let a = fs::read(generate(dir.path(), "density", "6")).unwrap();
    let b = fs::read(generate(dir.path(), "density", "6")).unwrap();
    assert_eq!(a, b);
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("density6.g.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "generate");
    assert_eq!(manifest["parameters"]["n"], 6);
    assert_eq!(manifest["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn bad_family_size_is_an_input_error() {
    assert_eq!(iabc(&["generate", "--family", "fig2", "--n", "3"]).status.code(), Some(2));
    assert_eq!(iabc(&["generate", "--family", "complete"]).status.code(), Some(2));
}

#[test]
fn malformed_graph_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.g", "nodes 3\nedge 1 2\nedge 2 9\n");
    let out = iabc(&["check", &bad, "--f", "1", "--l", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn small_graph_fails_on_size_bound() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.g", "nodes 3\nundirected\nedge 1 2\nedge 2 3\nedge 1 3\n");
    let out = iabc(&["check", &g, "--f", "1", "--l", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("degree bound fails"));
}

#[test]
fn relay_depths() {
    let dir = tempfile::tempdir().unwrap();
    let fig2 = generate(dir.path(), "fig2", "7");
    assert_eq!(stdout(&iabc(&["l0", &fig2, "--f", "1"])).trim(), "2");
    let fig1 = scenarios().join("fig1.g");
    assert_eq!(stdout(&iabc(&["l0", fig1.to_str().unwrap(), "--f", "1"])).trim(), "2");
    let cycle = write(dir.path(), "c5.g", "nodes 5\nundirected\nedge 1 2\nedge 2 3\nedge 3 4\nedge 4 5\nedge 5 1\n");
    assert_eq!(stdout(&iabc(&["l0", &cycle, "--f", "1"])).trim(), "not-satisfiable");
}

#[test]
fn reduced_graph_commands() {
    let fig1 = scenarios().join("fig1.g");
    let fig1 = fig1.to_str().unwrap();
    let out = iabc(&["reduced", fig1, "--f", "1", "--l", "2", "--equivalence"]);
    assert_eq!((out.status.code(), stdout(&out).trim()), (Some(0), "agree: holds"));
    let out = iabc(&["reduced", fig1, "--f", "1", "--l", "1", "--equivalence"]);
    assert_eq!((out.status.code(), stdout(&out).trim()), (Some(0), "agree: fails"));

    let dir = tempfile::tempdir().unwrap();
    let k4 = generate(dir.path(), "complete", "4");
    let out = iabc(&["reduced", &k4, "--f", "0", "--l", "1", "--json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["reduced_graphs"], 1);
    assert_eq!(report["sources"]["1"], 1);

    assert_eq!(iabc(&["reduced", fig1, "--f", "1", "--l", "2", "--budget", "10"]).status.code(), Some(3));
    assert_eq!(iabc(&["reduced", fig1, "--f", "1", "--l", "2", "--equivalence", "--budget", "10"]).status.code(), Some(3));
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = scenarios().join("fig1.g");
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = iabc(&["check", fig1.to_str().unwrap(), "--f", "1", "--l", "1", "--report", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1));
        fs::read(path).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("a.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(manifest["wall_time_ms"].is_u64());
}

#[test]
fn simulation_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = scenarios().join("split_l2.toml");
    let run = |tag: &str| {
        let trace = dir.path().join(format!("{tag}.csv"));
        let deep = dir.path().join(format!("{tag}.json"));
        let report = dir.path().join(format!("{tag}.analysis.json"));
        let out = iabc(&[
            "simulate",
            config.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
            "--deep-trace",
            deep.to_str().unwrap(),
            "--analyze",
            report.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(stdout(&out).contains("analysis: pass"));
        [trace, deep, report].map(|p| fs::read(p).unwrap())
    };
    assert_eq!(run("a"), run("b"));
    let report: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("a.analysis.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn honest_equal_inputs_converge_immediately() {
    let out = iabc(&["simulate", scenarios().join("honest_complete.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("converged after 1 round"));
}

#[test]
fn simulation_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = scenarios().join("fig1.g");
    let fig1 = fig1.to_str().unwrap();
    let config = |name: &str, body: &str| write(dir.path(), name, &format!("graph = \"{fig1}\"\nf = 1\n{body}"));

    let slow = config("slow.toml", "l = 2\nfaulty = [5]\ninitial_states = [0.0, 1.0, 1.0, 0.0, 0.5]\nmax_rounds = 3\n[adversary]\nkind = \"honest\"\n");
    assert_eq!(iabc(&["simulate", &slow]).status.code(), Some(5));

    let strict = config("strict.toml", "l = 1\nfaulty = [5]\ninitial_states = [0.0, 1.0, 1.0, 0.0, 0.5]\nrequire_condition = true\n[adversary]\nkind = \"honest\"\n");
    assert_eq!(iabc(&["simulate", &strict]).status.code(), Some(1));

    let broken = config("broken.toml", "l = 1\nfaulty = [9]\ninitial_states = \"split:0,1\"\n[adversary]\nkind = \"honest\"\n");
    assert_eq!(iabc(&["simulate", &broken]).status.code(), Some(2));

    let ring = write(dir.path(), "ring.g", "nodes 4\nedge 1 2\nedge 2 3\nedge 3 4\nedge 4 1\n");
    let ring_cfg = write(
        dir.path(),
        "ring.toml",
        &format!("graph = \"{ring}\"\nl = 1\nf = 1\nfaulty = []\ninitial_states = [0.0, 1.0, 2.0, 3.0]\n[adversary]\nkind = \"honest\"\n"),
    );
    let out = iabc(&["simulate", &ring_cfg]);
    assert_eq!(out.status.code(), Some(6));
    assert!(String::from_utf8_lossy(&out.stderr).contains("node 1 in round 1"));
}

#[test]
fn equivalence_sweeps_agree() {
    for mode in ["undirected", "directed", "unique-source"] {
        let out = iabc(&["equiv", "--mode", mode, "--n-max", "5", "--f", "1", "--samples", "300", "--json"]);
        assert_eq!(out.status.code(), Some(0), "{mode}");
        let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(summary["agreements"], 300, "{mode}");
        assert_eq!(summary["disagreements"].as_array().unwrap().len(), 0, "{mode}");
    }
}

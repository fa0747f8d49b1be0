use std::path::Path;
use std::process::{Command, Output};

use genlab::relu_net::ReluNetwork;

fn genlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn build_approx_writes_network_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("net.json");
    let out = genlab(&[
        "build-approx",
        "--func",
        "sqrt",
        "--alpha",
        "0.5",
        "--eps",
        "0.25",
        "--seed",
        "1",
        "--out",
        net_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let net = ReluNetwork::from_json(&read(&net_path)).unwrap();
    assert_eq!((net.input_dim(), net.output_dim()), (1, 1));
    let budget: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("net.budget.json"))).unwrap();
    assert_eq!(
        budget["metrics"]["depth"].as_u64().unwrap() as usize,
        net.depth()
    );
    assert_eq!(budget["l1_below_eps"], serde_json::Value::Bool(true));
}

#[test]
fn rate_sweep_is_deterministic_and_writes_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(name);
        let out = genlab(&[
            "rate-sweep",
            "--manifold",
            "circle:1",
            "--ns",
            "32,64,128",
            "--reps",
            "3",
            "--seed",
            "4",
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        csv
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    let text = read(&a);
    assert_eq!(text, read(&b));
    assert_eq!(text.lines().next(), Some("n,replicate,w1,seed"));
    assert_eq!(text.lines().count(), 1 + 9);
    for ext in ["floor.csv", "svg", "summary.json"] {
        assert!(
            dir.path().join(format!("a.{ext}")).exists(),
            "missing {ext}"
        );
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "set = \"ball:1\"\npairs = 50\nseed = 3\n").unwrap();
    let out = genlab(&[
        "starshape-audit",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "random-polygon:8:2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let audit: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // random polygons are reported by their explicit vertex list
    let set = audit["set"].as_str().unwrap();
    assert!(
        set.starts_with("polygon:") && set.split(';').count() == 8,
        "{set}"
    );
    assert_eq!(audit["pairs"], 50);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "sed = 3\n").unwrap();
    let out = genlab(&["starshape-audit", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sed"));
}

#[test]
fn bad_specs_fail_with_a_message() {
    let out = genlab(&[
        "transport-check",
        "--manifold",
        "klein:1",
        "--density",
        "uniform",
        "--n",
        "64",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("manifold"));
}

#[test]
fn noisy_sweep_runs_with_a_single_size() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("noisy.csv");
    let out = genlab(&[
        "rate-sweep",
        "--manifold",
        "sphere:1",
        "--ns",
        "64",
        "--reps",
        "3",
        "--noise-sigma",
        "0.1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let noisy: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("noisy.noisy.json"))).unwrap();
    assert_eq!(noisy["ambient_dim"], 3);
    assert_eq!(noisy["rows"].as_array().unwrap().len(), 3);
    let summary: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("noisy.summary.json"))).unwrap();
    assert!(summary["fit"].is_null());
}

//! End-to-end CLI tests: file contracts, exit codes, and deterministic
//! experiment outputs.

use std::path::Path;
use std::process::Command;

fn dt3() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dt3"))
}

fn run_in(dir: &Path, args: &[&str]) -> std::process::Output {
    dt3()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn dt3")
}

fn code(out: &std::process::Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn generate_triangulate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let out = run_in(d, &["generate", "helix", "--n", "1024", "--seed", "7", "--out", "h.xyz"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let xyz = std::fs::read_to_string(d.join("h.xyz")).unwrap();
    assert_eq!(xyz.lines().count(), 1024);
    assert!(d.join("h.provenance.json").exists());

    let out = run_in(d, &["generate", "seams", "--m", "65", "--out", "s.xyz"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read_to_string(d.join("s.xyz")).unwrap().lines().count(),
        130
    );

    let out = run_in(
        d,
        &["generate", "mattress", "--n", "4096", "--spread", "16", "--out", "m.xyz"],
    );
    assert_eq!(code(&out), 0);
    let prov: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("m.provenance.json")).unwrap())
            .unwrap();
    assert_eq!(prov["params"]["w"], 16);
    assert_eq!(prov["params"]["r"], 1);

    let out = run_in(
        d,
        &[
            "triangulate",
            "--input",
            "h.xyz",
            "--out-tets",
            "h.tets",
            "--off",
            "h.off",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("h.stats.json")).unwrap()).unwrap();
    assert_eq!(stats["schema"], 1);
    assert!(stats["n_edges"].as_u64().unwrap() >= 131_072);
    // OFF header sanity.
    let off = std::fs::read_to_string(d.join("h.off")).unwrap();
    let mut lines = off.lines();
    assert_eq!(lines.next(), Some("OFF"));
    let counts: Vec<usize> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(counts[0], 1024);
    assert_eq!(off.lines().count(), 2 + counts[0] + counts[1]);

    // Tiny tetrahedron: stats 4/6/4/1.
    std::fs::write(d.join("t.xyz"), "0 0 0\n1 0 0\n0 1 0\n0 0 1\n").unwrap();
    let out = run_in(
        d,
        &["triangulate", "--input", "t.xyz", "--out-tets", "t.tets", "--validate"],
    );
    assert_eq!(code(&out), 0);
    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("t.stats.json")).unwrap()).unwrap();
    assert_eq!(stats["n_vertices"], 4);
    assert_eq!(stats["n_edges"], 6);
    assert_eq!(stats["n_triangles"], 4);
    assert_eq!(stats["n_tets"], 1);
    assert_eq!(
        std::fs::read_to_string(d.join("t.tets")).unwrap().lines().count(),
        1
    );
}

#[test]
fn error_exit_codes_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    std::fs::write(d.join("dup.xyz"), "0 0 0\n1 0 0\n0 0 0\n0 1 0\n").unwrap();
    let out = run_in(d, &["triangulate", "--input", "dup.xyz", "--out-tets", "x.tets"]);
    assert_eq!(code(&out), 4, "duplicate points");

    std::fs::write(d.join("flat.xyz"), "0 0 0\n1 0 0\n0 1 0\n1 1 0\n2 2 0\n").unwrap();
    let out = run_in(d, &["triangulate", "--input", "flat.xyz", "--out-tets", "x.tets"]);
    assert_eq!(code(&out), 5, "coplanar cloud");

    let out = run_in(d, &["triangulate", "--input", "missing.xyz", "--out-tets", "x.tets"]);
    assert_eq!(code(&out), 3, "unreadable file");

    let out = run_in(d, &["verify", "neighborly", "--n", "64", "--spacing", "bogus"]);
    assert_eq!(code(&out), 2, "usage error");

    let out = dt3().current_dir(d).arg("nonsense").output().unwrap();
    assert_eq!(code(&out), 2, "unknown subcommand (clap)");
}

#[test]
fn verify_commands_pass() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        vec!["verify", "oracle", "--n", "32", "--trials", "10", "--seed", "3"],
        vec!["verify", "neighborly", "--n", "64"],
        vec!["verify", "bitangent", "--t", "1.5708"],
        vec!["verify", "seams", "--m", "33"],
        vec!["verify", "pitch", "--draws", "300"],
    ] {
        let out = run_in(d, &args);
        assert_eq!(
            code(&out),
            0,
            "{:?}: {}",
            args,
            String::from_utf8_lossy(&out.stderr)
        );
        // Reports are JSON with a pass flag on stdout.
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn experiment_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // Small, fast seam config with pilot-frozen tolerances.
    std::fs::write(
        d.join("cfg.json"),
        serde_json::json!({
            "family": "seams",
            "sizes": [9, 17, 33],
            "seed": 1,
            "tolerances": { "expected_slope": 2.0, "slope_tol": 0.35 }
        })
        .to_string(),
    )
    .unwrap();
    let out = run_in(d, &["experiment", "--config", "cfg.json", "--out-dir", "r1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run_in(d, &["experiment", "--config", "cfg.json", "--out-dir", "r2"]);
    assert_eq!(code(&out), 0);
    let a = std::fs::read(d.join("r1/seams_records.csv")).unwrap();
    let b = std::fs::read(d.join("r2/seams_records.csv")).unwrap();
    assert_eq!(a, b, "rerun must be byte-identical");
    assert!(!a.is_empty());
    let fit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("r1/seams_fit.json")).unwrap())
            .unwrap();
    assert_eq!(fit["pass"], true);

    // Config missing "sizes" is a usage error.
    std::fs::write(
        d.join("bad.json"),
        r#"{"family":"seams","seed":1,"tolerances":{"expected_slope":2.0,"slope_tol":0.3}}"#,
    )
    .unwrap();
    let out = run_in(d, &["experiment", "--config", "bad.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn helix_scaling_config_passes() {
    // The frozen criterion-3 config, exercised through the CLI.
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/helix_scaling.json");
    let out = run_in(d, &["experiment", "--config", cfg, "--out-dir", "out"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let fit: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(d.join("out/helix_sqrt_fit.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(fit["pass"], true);
    let slope = fit["fit"]["slope"].as_f64().unwrap();
    assert!((slope - 1.5).abs() <= 0.08, "slope {slope}");
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cckp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cckp")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_adapt_solve_verify() {
    let dir = tempfile::tempdir().unwrap();
    let txt = dir.path().join("inst.txt");
    let cc = dir.path().join("inst.json");
    stdout(&cckp(&[
        "generate",
        "--kind",
        "uncorr",
        "-n",
        "10",
        "--seed",
        "4",
        "-o",
        path(&txt),
    ]));
    assert!(fs::read_to_string(&txt).unwrap().starts_with("10\n"));

    let out = cckp(&[
        "adapt",
        "--instance",
        path(&txt),
        "--model",
        "additive:20",
        "--alpha",
        "0.01",
        "-o",
        path(&cc),
    ]);
    stdout(&out);
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["gamma"], 100);

    let solved: serde_json::Value = serde_json::from_str(&stdout(&cckp(&[
        "solve",
        path(&cc),
        "--algorithm",
        "ea",
        "--method",
        "chernoff",
        "--budget",
        "3000",
        "--seed",
        "2",
    ])))
    .unwrap();
    assert_eq!(solved["evaluations"], 3000);
    let best = solved["best"].as_str().unwrap().to_string();
    let found = solved["best_feasible_profit"].as_u64().unwrap();

    let verified: serde_json::Value = serde_json::from_str(&stdout(&cckp(&[
        "verify",
        "--instance",
        path(&cc),
        "--solution",
        &best,
        "--samples",
        "20000",
    ])))
    .unwrap();
    assert_eq!(verified["profit"].as_u64().unwrap(), found);
    assert!(verified["bounds"]["chernoff"].as_f64().unwrap() <= 0.01);
    assert!(verified["exhaustive_optimum"]["chernoff"]["profit"].as_u64().unwrap() >= found);
}

#[test]
fn same_seed_same_search() {
    let dir = tempfile::tempdir().unwrap();
    let txt = dir.path().join("inst.txt");
    stdout(&cckp(&["generate", "-n", "30", "-o", path(&txt)]));
    let args = ["solve", path(&txt), "--budget", "2000", "--seed", "9"];
    assert_eq!(stdout(&cckp(&args)), stdout(&cckp(&args)));
}

#[test]
fn experiment_writes_outputs_and_figures() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.json");
    fs::write(
        &config,
        r#"{
            "instances": [{"name": "g", "generate": {"kind": "bou-s-c", "n": 20, "seed": 3}}],
            "alphas": [0.001, 0.01],
            "deltas": [25],
            "algorithms": ["ea_cantelli", "gsemo_chernoff"],
            "repetitions": 3,
            "budget": 500
        }"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let table = stdout(
        &Command::new(env!("CARGO_BIN_EXE_cckp"))
            .args(["experiment", "--config", path(&config)])
            .env("CCKP_OUTPUT_DIR", &out_dir)
            .output()
            .unwrap(),
    );
    assert_eq!(table, fs::read_to_string(out_dir.join("table.csv")).unwrap());
    assert_eq!(table.lines().count(), 3);
    assert_eq!(
        fs::read_to_string(out_dir.join("raw_records.jsonl"))
            .unwrap()
            .lines()
            .count(),
        12
    );

    let fig2 = stdout(&cckp(&[
        "figures",
        "fig2",
        "--table",
        path(&out_dir.join("table.csv")),
        "--instance",
        "g",
        "--uncertainty",
        "delta=25",
    ]));
    assert_eq!(fig2.lines().next(), Some("algorithm,alpha,mean"));
    assert_eq!(fig2.lines().count(), 5);

    let fig1 = stdout(&cckp(&["figures", "fig1", "--e-max", "10"]));
    assert_eq!(fig1.lines().count(), 51);
}

#[test]
fn bad_input_fails_cleanly() {
    let out = cckp(&[
        "adapt",
        "--instance",
        "/nonexistent",
        "--model",
        "additive:5",
        "--alpha",
        "0.1",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent"));
    assert!(
        !cckp(&["adapt", "--instance", "x", "--model", "normal", "--alpha", "0.1"])
            .status
            .success()
    );
}

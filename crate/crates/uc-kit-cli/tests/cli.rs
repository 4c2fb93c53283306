use std::path::Path;
use std::process::{Command, Output};

fn uc_kit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uc-kit")).args(args).current_dir(dir).env_remove("UC_KIT_SEED").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SOLVE: &str = r#"{
  "command": "solve",
  "body": "lp:4:1:2",
  "seed": 3,
  "solve": { "objective": { "kind": "quadratic", "b": [2.0, 0.5] }, "max_iter": 500 }
}"#;

#[test]
fn missing_body_exits_1_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = uc_kit(&["certify", "--alpha", "auto"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`body`"), "{}", stderr(&o));

    let cfg = write(dir.path(), "c.json", r#"{"solve": {"max_iter": 10}}"#);
    let o = uc_kit(&["solve", "--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("body"));
}

#[test]
fn validation_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.json", r#"{"body": "lp:2:1:2", "solve": {"max_iter": 5, "typo": 1}}"#);
    let o = uc_kit(&["solve", "--config", &unknown], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("typo"));

    for body in ["lp:2:1", "cube:2:1:2", "lp:0.5:1:2", "lp:2:1:0", "ell:missing.json"] {
        let o = uc_kit(&["moduli", "--body", body], dir.path());
        assert_eq!(o.status.code(), Some(1), "{body}: {}", stderr(&o));
    }
    let o = uc_kit(&["solve", "--body", "lp:2:1:2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("solve.objective"));

    let wrong = write(dir.path(), "w.json", r#"{"command": "moduli", "body": "lp:2:1:2"}"#);
    assert_eq!(uc_kit(&["solve", "--config", &wrong], dir.path()).status.code(), Some(1));
    assert_eq!(uc_kit(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(uc_kit(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn overflowing_objective_is_a_numerical_abort() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "n.json",
        r#"{"body": "lp:2:1:2", "solve": {"objective": {"kind": "quadratic", "b": [1e200, 0]}}}"#,
    );
    let o = uc_kit(&["solve", "--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn solve_writes_trace_rate_manifest_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", SOLVE);
    let o = uc_kit(&["solve", "--config", &cfg, "--out", "run"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let run = dir.path().join("run");
    let trace = read(run.join("trace.csv"));
    assert!(trace.starts_with("k,f_value,fw_gap,step_size,primal_gap\n"));
    assert_eq!(trace.lines().count(), 502);
    let rate: serde_json::Value = serde_json::from_str(&read(run.join("rate.json"))).unwrap();
    assert_eq!(rate["fit"]["model"], "power_law");
    assert!((rate["predicted_exponent"].as_f64().unwrap() + 5.0 / 3.0).abs() < 1e-12);
    assert!(read(run.join("gap.svg")).starts_with("<svg"));
    let manifest: serde_json::Value = serde_json::from_str(&read(run.join("manifest.json"))).unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["config"]["solve"]["max_iter"], 500);
    // No temporary files are left behind.
    assert_eq!(std::fs::read_dir(&run).unwrap().count(), 4);

    let o = uc_kit(&["solve", "--config", &cfg, "--out", "bare", "--no-plots"], dir.path());
    assert!(o.status.success());
    assert!(!dir.path().join("bare/gap.svg").exists());
}

#[test]
fn reruns_from_the_manifest_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", SOLVE);
    assert!(uc_kit(&["solve", "--config", &cfg, "--out", "a"], dir.path()).status.success());
    let manifest: serde_json::Value = serde_json::from_str(&read(dir.path().join("a/manifest.json"))).unwrap();
    let echo = write(dir.path(), "echo.json", &manifest["config"].to_string());
    assert!(uc_kit(&["solve", "--config", &echo, "--out", "b", "--threads", "3"], dir.path()).status.success());
    for f in ["trace.csv", "rate.json", "gap.svg"] {
        assert_eq!(read(dir.path().join("a").join(f)), read(dir.path().join("b").join(f)), "{f}");
    }
    let other = uc_kit(&["solve", "--config", &cfg, "--out", "c", "--seed", "4"], dir.path());
    assert!(other.status.success());
    assert_ne!(read(dir.path().join("a/trace.csv")), read(dir.path().join("c/trace.csv")));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.json",
        r#"{"body": "lp:3:1:2", "solve": {"objective": {"kind": "quadratic", "b": [1, 1]}, "max_iter": 20}}"#,
    );
    let run = |extra: &[&str], seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_uc-kit"));
        c.args(["solve", "--config", &cfg]).args(extra).current_dir(dir.path()).env_remove("UC_KIT_SEED");
        if let Some(s) = seed {
            c.env("UC_KIT_SEED", s);
        }
        let o = c.output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
    };
    run(&["--out", "env"], Some("41"));
    run(&["--out", "flag", "--seed", "7"], Some("41"));
    run(&["--out", "none"], None);
    let seed = |d: &str| -> u64 {
        let m: serde_json::Value = serde_json::from_str(&read(dir.path().join(d).join("manifest.json"))).unwrap();
        m["seed"].as_u64().unwrap()
    };
    assert_eq!((seed("env"), seed("flag"), seed("none")), (41, 7, 0));
}

#[test]
fn certify_prints_the_alpha_chain() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"certify": {"budget": {"restarts": 100, "rounds": 10}, "grid": [0.25, 0.5, 0.75, 1.0, 1.5]}}"#,
    );
    let o = uc_kit(
        &[
            "certify",
            "--body",
            "lp:4:1:3",
            "--item",
            "b",
            "--alpha",
            "auto",
            "--samples",
            "5000",
            "--config",
            &cfg,
            "--out",
            "c",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    for line in ["fit (1c)", "1c -> 1a", "1a -> 1b", "margin 10%", "check global_scaling", "result: PASS"] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }
    let chain = read(dir.path().join("c/chain.csv"));
    assert!(chain.starts_with("from_item,to_item,alpha_in,p_in,alpha_out,p_out,formula_id\n"));
    assert_eq!(chain.lines().count(), 3);
    let report: serde_json::Value = serde_json::from_str(&read(dir.path().join("c/report.json"))).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["report"]["violations"], 0);

    let o = uc_kit(
        &[
            "certify",
            "--body",
            "lp:2:1:2",
            "--item",
            "a",
            "--alpha",
            "0.3",
            "--exponent",
            "2",
            "--samples",
            "5000",
            "--out",
            "d",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("result: FAIL"));
    let o = uc_kit(&["certify", "--body", "lp:2:1:2", "--item", "a", "--alpha", "0.1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("certify.exponent"));
    assert_eq!(uc_kit(&["certify", "--body", "lp:2:1:2", "--item", "c"], dir.path()).status.code(), Some(1));
}

#[test]
fn ellipsoid_shorthand_and_moduli() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "q.json", "[[2.0, 0.0], [0.0, 0.5]]");
    let cfg = write(
        dir.path(),
        "m.json",
        r#"{"moduli": {"kind": "delta", "grid": [0.5, 1.0, 1.5], "budget": {"restarts": 50, "rounds": 5}}}"#,
    );
    let o = uc_kit(&["moduli", "--body", "ell:q.json", "--config", &cfg, "--out", "m"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let curve = read(dir.path().join("m/curve.csv"));
    assert!(curve.starts_with("kind,grid,value,bias,seed,budget\n"));
    assert_eq!(curve.lines().count(), 4);
    assert!(dir.path().join("m/fit.json").exists());
    let o = uc_kit(&["moduli", "--body", "lp:2:1:2", "--kind", "nu", "--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("moduli.anchor"));
}

#[test]
fn rademacher_is_thread_count_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "r.json",
        r#"{"body": "lp:4:1:6", "rademacher": {"data": {"kind": "signed_coordinates"}, "uc": {"alpha": 0.01, "exponent": 4}, "n_grid": [4, 16, 64], "trials": 300}}"#,
    );
    for (out, threads) in [("one", "1"), ("four", "4")] {
        let o = uc_kit(&["rademacher", "--config", &cfg, "--out", out, "--threads", threads], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = read(dir.path().join("one/rademacher.csv"));
    assert_eq!(a, read(dir.path().join("four/rademacher.csv")));
    assert!(a.starts_with("n,mean,stderr,trials,body,distribution,seed\n"));
}

#[test]
fn bench_reports_each_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let o = uc_kit(&["bench", "--body", "lp:3:1:4", "--reps", "200", "--out", "b"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = read(dir.path().join("b/bench.csv"));
    for op in ["gauge", "support", "lmo", "polar_lmo", "pafw_iteration"] {
        assert!(csv.lines().any(|l| l.starts_with(op)), "{op}");
    }
}

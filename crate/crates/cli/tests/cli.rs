use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swapcorr"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_matrix(dir: &Path, name: &str, re: &[&[f64]], im: Option<&[&[f64]]>) -> PathBuf {
    let path = dir.join(name);
    let mut v = serde_json::json!({ "dims": [re.len()], "re": re });
    if let Some(im) = im {
        v["im"] = serde_json::json!(im);
    }
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

struct Fixtures {
    dir: TempDir,
    zero: PathBuf,
    one: PathBuf,
    mixed: PathBuf,
    plus_y: PathBuf,
    tilted: PathBuf,
}

fn fixtures() -> Fixtures {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    Fixtures {
        zero: write_matrix(p, "zero.json", &[&[1.0, 0.0], &[0.0, 0.0]], None),
        one: write_matrix(p, "one.json", &[&[0.0, 0.0], &[0.0, 1.0]], None),
        mixed: write_matrix(p, "mixed.json", &[&[0.5, 0.0], &[0.0, 0.5]], None),
        plus_y: write_matrix(
            p,
            "plus_y.json",
            &[&[0.5, 0.0], &[0.0, 0.5]],
            Some(&[&[0.0, -0.5], &[0.5, 0.0]]),
        ),
        tilted: write_matrix(p, "tilted.json", &[&[0.7, 0.1], &[0.1, 0.3]], None),
        dir,
    }
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["sweep", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        run(&["sweep", "--resolution", "many", "--out", "x.csv"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn overlap_examples() {
    let f = fixtures();
    let o = run(&[
        "overlap",
        f.plus_y.to_str().unwrap(),
        f.plus_y.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!((json(&o)["stats"]["overlap"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let o = run(&["overlap", f.zero.to_str().unwrap(), f.one.to_str().unwrap()]);
    let v = json(&o);
    assert!(v["stats"]["overlap"].as_f64().unwrap().abs() < 1e-12);
    assert!((v["stats"]["p_plus"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let o = run(&[
        "overlap",
        f.mixed.to_str().unwrap(),
        f.mixed.to_str().unwrap(),
    ]);
    let v = json(&o);
    assert!((v["stats"]["overlap"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(v["sampled"].is_null());
    assert_eq!(v["manifest"]["command"], "overlap");
    assert_eq!(v["manifest"]["seed"], 0);
}

#[test]
fn overlap_shots_are_seeded() {
    let f = fixtures();
    let args = |seed: &'static str| {
        vec![
            "overlap".to_string(),
            f.zero.to_str().unwrap().to_string(),
            f.mixed.to_str().unwrap().to_string(),
            "--shots".into(),
            "20000".into(),
            "--seed".into(),
            seed.into(),
        ]
    };
    let a = json(&bin().args(args("5")).output().unwrap());
    let b = json(&bin().args(args("5")).output().unwrap());
    assert_eq!(a["sampled"], b["sampled"]);
    assert_eq!(a["manifest"]["seed"], 5);
    let est = a["sampled"]["estimate"].as_f64().unwrap();
    let se = a["sampled"]["std_error"].as_f64().unwrap();
    assert!((est - 0.5).abs() <= 5.0 * se);
}

#[test]
fn analyze_trichotomy() {
    let f = fixtures();
    let o = run(&[
        "analyze",
        f.tilted.to_str().unwrap(),
        f.tilted.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["report"]["classification"], "classical-only");
    assert!(v["witness"].is_null());

    let o = run(&[
        "analyze",
        f.zero.to_str().unwrap(),
        f.tilted.to_str().unwrap(),
    ]);
    let v = json(&o);
    assert_eq!(v["report"]["classification"], "entangled");
    assert!(v["witness"]["value"].as_f64().unwrap() < 0.0);
    assert_eq!(v["witness"]["vector"]["re"].as_array().unwrap().len(), 8);

    let o = run(&[
        "analyze",
        f.plus_y.to_str().unwrap(),
        f.plus_y.to_str().unwrap(),
    ]);
    assert_eq!(json(&o)["report"]["classification"], "product");
}

#[test]
fn analyze_writes_output_file() {
    let f = fixtures();
    let out = f.dir.path().join("report.json");
    let o = run(&[
        "analyze",
        f.zero.to_str().unwrap(),
        f.one.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["manifest"]["command"], "analyze");
    assert_eq!(v["report"]["classification"], "entangled");
}

#[test]
fn invalid_inputs_exit_two() {
    let f = fixtures();
    let p = f.dir.path();
    let qutrit = write_matrix(
        p,
        "qutrit.json",
        &[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]],
        None,
    );
    let o = run(&[
        "overlap",
        f.zero.to_str().unwrap(),
        qutrit.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dimension mismatch"));

    let bad = p.join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(
        run(&["analyze", bad.to_str().unwrap(), bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let not_psd = write_matrix(p, "neg.json", &[&[1.5, 0.0], &[0.0, -0.5]], None);
    assert_eq!(
        run(&[
            "analyze",
            not_psd.to_str().unwrap(),
            f.zero.to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );

    let missing = p.join("missing.json");
    assert_eq!(
        run(&[
            "overlap",
            missing.to_str().unwrap(),
            f.zero.to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );

    let n = 9;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 1.0 / n as f64 } else { 0.0 })
                .collect()
        })
        .collect();
    let big = p.join("big.json");
    std::fs::write(
        &big,
        serde_json::json!({ "dims": [n], "re": rows }).to_string(),
    )
    .unwrap();
    let o = run(&["overlap", big.to_str().unwrap(), big.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));

    let out = p.join("s.csv");
    assert_eq!(
        run(&["sweep", "--resolution", "1", "--out", out.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "trajectory",
            "--t-switch",
            "0.9",
            "--out",
            out.to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn sweep_is_deterministic_with_manifest() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let o = run(&["sweep", "--resolution", "3", "--out", a.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("anomalies: 0"));
    assert!(
        run(&["sweep", "--resolution", "3", "--out", b.to_str().unwrap()])
            .status
            .success()
    );
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(
        lines[0],
        "a1,a2,total_bits,negativity_sum,discord_bits,class"
    );
    assert!(lines[1].starts_with("-1,-1,0,0,0,product"));
    assert!(lines[9].starts_with("1,1,0,0,0,product"));
    assert!(lines[3].starts_with("-1,1,"));
    assert!(lines[3].ends_with(",entangled"));

    let m: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m["command"], "sweep");
    assert_eq!(m["parameters"]["resolution"], 3);
    assert_eq!(m["seed"], 0);
    assert!(m["tool_version"].is_string());
    assert!(chrono::DateTime::parse_from_rfc3339(m["timestamp"].as_str().unwrap()).is_ok());
}

#[test]
fn trajectory_defaults_reproduce_death_at_switch() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.csv");
    let o = run(&["trajectory", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let death: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("death_time: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((death - 0.2).abs() <= 1e-3);

    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,a1,a2,total_bits,negativity_sum,discord_bits,class\n"));
    assert_eq!(csv.lines().count(), 102);

    let m: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("t.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m["command"], "trajectory");
    assert_eq!(m["parameters"]["gamma1_early"], 10.0);
    assert_eq!(m["parameters"]["gamma2_early"], 5.0);
    assert_eq!(m["parameters"]["t_switch"], 0.2);
    assert_eq!(m["parameters"]["late_segment"], "carry");
}

#[test]
fn trajectory_equal_inputs_never_entangle() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.csv");
    let o = run(&[
        "trajectory",
        "--gamma1-early",
        "10",
        "--gamma2-early",
        "10",
        "--a10",
        "1",
        "--a20",
        "1",
        "--n-steps",
        "21",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[4], "0", "{line}");
        assert_ne!(fields[6], "entangled");
    }
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 9);
    assert!(!text.contains("FAIL"));
}

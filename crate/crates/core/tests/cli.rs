use std::collections::BTreeMap;
use std::process::{Command, Output};

use xyzchain::analysis::{SweepSpec, SweepVariable};
use xyzchain::model::Couplings;

fn xyzchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xyzchain"))
        .args(args)
        .env_remove("XYZCHAIN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Row {
    var: String,
    value: f64,
    c: f64,
    branch: String,
    probs: [f64; 4],
}

fn parse_csv(text: &str) -> Vec<Row> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "var,value,C,branch,p_phi_plus,p_phi_minus,p_psi_plus,p_psi_minus"
    );
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 8, "{l}");
            let num = |i: usize| f[i].parse::<f64>().unwrap();
            Row {
                var: f[0].to_string(),
                value: num(1),
                c: num(2),
                branch: f[3].to_string(),
                probs: [num(4), num(5), num(6), num(7)],
            }
        })
        .collect()
}

#[test]
fn eval_reports() {
    let o = xyzchain(&["eval", "--jx", "1", "--jy", "1", "--jz", "1", "--kt", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let field = |name: &str| {
        out.lines()
            .find_map(|l| l.strip_prefix(name).filter(|r| r.starts_with(' ')).map(|r| r.trim().to_string()))
            .unwrap_or_else(|| panic!("no {name} in {out}"))
    };
    let c: f64 = field("C").parse().unwrap();
    let e4 = (-4.0f64).exp();
    assert!((c - (1.0 - 3.0 * e4) / (1.0 + 3.0 * e4)).abs() < 1e-11);
    assert_eq!(field("branch"), "C1");
    for key in ["raw", "Delta", "Sigma", "anisotropy", "alpha", "beta", "gamma", "Z", "p_psi_minus", "zero_manifold_distance"] {
        field(key);
    }

    let o = xyzchain(&["eval", "--jx", "0", "--jy", "0", "--jz", "1", "--kt", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["C", "0"]));
}

#[test]
fn validation_exits_two_and_names_the_flag() {
    let o = xyzchain(&["eval", "--jx", "1", "--jy", "1", "--jz", "1", "--kt", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kt must be > 0"));
    assert!(stderr(&o).contains("--kt"));

    let o = xyzchain(&["eval", "--jx", "nan", "--kt", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = xyzchain(&["sweep", "--var", "kt", "--from", "2", "--to", "0.01", "--steps", "3", "--jx", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = xyzchain(&["sweep", "--var", "spin", "--from", "0", "--to", "1", "--kt", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--var"));

    let o = xyzchain(&["tc", "--jx", "1", "--from", "3", "--to", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = xyzchain(&["scan", "--range", "2", "--step", "-1", "--kts", "0.5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = xyzchain(&["verify", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = xyzchain(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn io_failure_exits_one() {
    let o = xyzchain(&["sweep", "--preset", "fig1", "-o", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tc_outputs() {
    let run = |args: &[&str]| stdout(&xyzchain(args)).trim().to_string();
    assert_eq!(run(&["tc", "--jx", "1", "--jy", "1", "--jz", "1"]), "0.91023923");
    assert_eq!(run(&["tc", "--jx", "0", "--jy", "0", "--jz", "1"]), "none");
    assert_eq!(run(&["tc", "--jx", "1", "--jy", "1", "--jz", "0"]), "0.56729632");
    assert_eq!(run(&["tc", "--jx", "-1", "--jy", "-1", "--jz", "-1"]), "none");
}

#[test]
fn fig2_series_are_ordered() {
    let o = xyzchain(&["sweep", "--preset", "fig2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_csv(&stdout(&o));
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in &rows {
        series.entry(r.var.clone()).or_default().push((r.value, r.c));
    }
    let keys: Vec<_> = series.keys().cloned().collect();
    assert_eq!(keys, ["kt@anisotropy=1.2", "kt@anisotropy=1.4", "kt@anisotropy=1.7"]);
    let s: Vec<_> = keys.iter().map(|k| &series[k]).collect();
    assert!(s.iter().all(|v| v.len() == 200));
    for i in 0..200 {
        assert_eq!(s[0][i].0, s[2][i].0);
        // the greater δ the greater C, wherever any series is entangled
        if s[2][i].1 > 0.0 {
            assert!(s[0][i].1 <= s[1][i].1 && s[1][i].1 < s[2][i].1, "kt={}", s[0][i].0);
        }
    }
}

#[test]
fn delta_sweep_hits_manifold() {
    let o = xyzchain(&[
        "sweep", "--var", "delta", "--from", "-8", "--to", "8", "--steps", "321", "--sigma", "2", "--jz", "1",
        "--kt", "0.05",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 321);
    assert!(rows.iter().all(|r| r.var == "delta"));
    for d in [-4.0, 4.0] {
        let r = rows.iter().find(|r| r.value == d).expect("grid node");
        assert_eq!(r.c, 0.0);
    }
    for r in &rows {
        assert!((r.probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(r.branch == "C1" || r.branch == "C2");
    }
}

#[test]
fn csv_round_trip() {
    let o = xyzchain(&[
        "probs", "--var", "jz", "--from", "-10", "--to", "10", "--steps", "81", "--delta", "7", "--sigma", "1",
        "--kt", "0.4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let spec = SweepSpec {
        variable: SweepVariable::Jz,
        start: -10.0,
        stop: 10.0,
        steps: 81,
        base: Couplings::from_delta_sigma(7.0, 1.0, 0.0).unwrap(),
        kt: 0.4,
    };
    let rows = parse_csv(&stdout(&o));
    for (row, record) in rows.iter().zip(xyzchain::analysis::sweep(&spec).unwrap().records) {
        assert!((row.value - record.value).abs() <= 1e-9);
        assert!((row.c - record.concurrence).abs() <= 1e-9);
        assert_eq!(row.branch, record.branch.label());
        for (a, b) in row.probs.iter().zip(record.probabilities.as_array()) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("fig5-{threads}.csv"));
        let o = xyzchain(&["--threads", threads, "sweep", "--preset", "fig5", "-o", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert!(!files[0].contains(&b'\r'));

    let env_run = Command::new(env!("CARGO_BIN_EXE_xyzchain"))
        .args(["sweep", "--preset", "fig5"])
        .env("XYZCHAIN_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(env_run.stdout, files[0]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# XXX antiferromagnet\njx = 1\njy=1\njz=1\nkt=5\n").unwrap();
    let path = cfg.to_str().unwrap();

    let o = xyzchain(&["--config", path, "tc"]);
    assert_eq!(stdout(&o).trim(), "0.91023923");

    let from_file = stdout(&xyzchain(&["--config", path, "eval"]));
    let overridden = stdout(&xyzchain(&["--config", path, "eval", "--kt", "0.25"]));
    let direct = stdout(&xyzchain(&["eval", "--jx", "1", "--jy", "1", "--jz", "1", "--kt", "0.25"]));
    assert_ne!(from_file, overridden);
    assert_eq!(overridden, direct);

    std::fs::write(&cfg, "jx 1\n").unwrap();
    assert_eq!(xyzchain(&["--config", path, "tc"]).status.code(), Some(2));
}

#[test]
fn scan_and_verify_commands() {
    let o = xyzchain(&["scan", "--range", "0", "--step", "1", "--kts", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("0 violations"));
    assert!(out.contains("1^3"));

    let o = xyzchain(&["scan", "--range", "1", "--step", "0.5", "--kts", "0.3,1"]);
    assert_eq!(o.status.code(), Some(0));

    let o = xyzchain(&["verify", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("samples: 1 "));

    let a = stdout(&xyzchain(&["verify", "--n", "200", "--seed", "9"]));
    let b = stdout(&xyzchain(&["verify", "--n", "200", "--seed", "9"]));
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("elapsed")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn every_preset_runs() {
    for name in ["fig1", "fig3", "fig4", "fig6", "fig7", "fig8", "fig5a", "fig6a"] {
        let o = xyzchain(&["sweep", "--preset", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert!(!parse_csv(&stdout(&o)).is_empty());
    }
}

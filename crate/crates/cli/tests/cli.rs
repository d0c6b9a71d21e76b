use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trotter-lab"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run_to(config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin().arg("run").arg(config).arg("--output").arg(out).args(extra).output().unwrap()
}

#[test]
fn lists_every_experiment() {
    let out = bin().arg("--list-experiments").output().unwrap();
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    for name in [
        "section1_battery",
        "trotter_rates",
        "envelope_audit",
        "evolution_rates",
        "cantor_demo",
        "slow_witness_demo",
        "bridge_check",
    ] {
        assert!(s.contains(name), "missing {name}");
    }
}

#[test]
fn misspelled_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"experiment": "trotter_rates", "parameters": {"alpa": 0.5}}"#);
    let out = run_to(&cfg, &dir.path().join("out.csv"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("alpa"), "{err}");
    assert!(!dir.path().join("out.csv").exists());
}

#[test]
fn unknown_experiment_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"experiment": "nope"}"#);
    assert_eq!(run_to(&cfg, &dir.path().join("o.csv"), &[]).status.code(), Some(2));
    let missing = dir.path().join("absent.json");
    assert_eq!(run_to(&missing, &dir.path().join("o.csv"), &[]).status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        ("bridge.json", r#"{"experiment": "bridge_check"}"#),
        ("cantor.json", r#"{"experiment": "cantor_demo", "parameters": {"m_levels": "2..3", "level_cap": 12}}"#),
        ("trotter.json", r#"{"experiment": "trotter_rates", "parameters": {"pairs": 2, "t_values": [1.0]}}"#),
    ];
    for (name, body) in configs {
        let cfg = write_config(dir.path(), name, body);
        for fmt in ["csv", "json"] {
            let a = dir.path().join(format!("{name}.a.{fmt}"));
            let b = dir.path().join(format!("{name}.b.{fmt}"));
            assert!(run_to(&cfg, &a, &["--format", fmt, "--seed", "11"]).status.success());
            assert!(run_to(&cfg, &b, &["--format", fmt, "--seed", "11"]).status.success());
            assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{name} {fmt}");
        }
    }
}

#[test]
fn header_embeds_resolved_config_and_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t.json", r#"{"experiment": "trotter_rates", "parameters": {"pairs": 1}}"#);
    let out = dir.path().join("t.csv");
    assert!(run_to(&cfg, &out, &["--seed", "42"]).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(header.iter().any(|l| *l == "# seed: 42"));
    let config = header.iter().find(|l| l.starts_with("# config: ")).unwrap();
    for key in ["\"alpha\":0.5", "\"pairs\":1", "\"seed\":42", "\"n_list\":[4,8,"] {
        assert!(config.contains(key), "{config}");
    }
    assert!(header.iter().any(|l| l.starts_with("# ledger: ") && l.contains("\"l1\"")));
    assert!(header.iter().any(|l| l.starts_with("# thresholds: ") && l.contains("\"omega_growth\":1.1")));
}

#[test]
fn seeds_change_random_batteries() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t.json", r#"{"experiment": "trotter_rates", "parameters": {"pairs": 1, "t_values": [1.0]}}"#);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(run_to(&cfg, &a, &["--seed", "1"]).status.success());
    assert!(run_to(&cfg, &b, &["--seed", "2"]).status.success());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.starts_with('{') && text.contains("\"experiment\": \"trotter_rates\""));
}

#[test]
fn failed_checks_exit_nonzero_but_still_write() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "w.json", r#"{"experiment": "slow_witness_demo"}"#);
    let out = dir.path().join("w.csv");
    let status = run_to(&cfg, &out, &[]).status;
    assert_eq!(status.code(), Some(1));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("witness_validated,true"));
}

#[test]
fn config_output_section_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_config.out");
    let body = format!(
        r#"{{"experiment": "bridge_check", "output": {{"path": {:?}, "format": "json"}}}}"#,
        target.to_str().unwrap()
    );
    let cfg = write_config(dir.path(), "b.json", &body);
    let out = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.trim_start().starts_with('{'));
    assert!(text.contains("\"passed\": true"));
}


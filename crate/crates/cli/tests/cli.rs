use std::fs;
use std::process::Command;

fn lab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heavytail-lab"))
}

fn write_config(dir: &std::path::Path, out: &std::path::Path) -> std::path::PathBuf {
    let cfg = dir.join("cfg.json");
    let body = serde_json::json!({
        "experiment": "mc-vs-nr",
        "seed": 4,
        "replicas": 4,
        "output_dir": out,
        "params": { "runs": 2000 }
    });
    fs::write(&cfg, body.to_string()).unwrap();
    cfg
}

#[test]
fn list_shows_all_experiments() {
    let out = lab().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 12);
    assert!(text.contains("size-biased-check"));
}

#[test]
fn run_then_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let cfg = write_config(tmp.path(), &out_dir);
    let run = lab().arg("run").arg(&cfg).env_remove("HEAVYTAIL_OUTPUT_DIR").output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    for f in ["results.csv", "aggregate.json", "manifest.json"] {
        assert!(out_dir.join(f).exists(), "{f} missing");
    }
    let header = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert!(header.starts_with("point,label,replica,key,value"));
    let verify = lab().arg("verify").arg(out_dir.join("manifest.json")).output().unwrap();
    assert!(verify.status.success(), "{}", String::from_utf8_lossy(&verify.stdout));
}

#[test]
fn environment_overrides_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let configured = tmp.path().join("configured");
    let overridden = tmp.path().join("overridden");
    let cfg = write_config(tmp.path(), &configured);
    let run = lab().arg("run").arg(&cfg).env("HEAVYTAIL_OUTPUT_DIR", &overridden).output().unwrap();
    assert!(run.status.success());
    assert!(overridden.join("results.csv").exists());
    assert!(!configured.exists());
}

#[test]
fn unknown_experiment_fails_with_listing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.json");
    fs::write(&cfg, r#"{"experiment": "nope"}"#).unwrap();
    let run = lab().arg("run").arg(&cfg).output().unwrap();
    assert!(!run.status.success());
    let err = String::from_utf8(run.stderr).unwrap();
    assert!(err.contains("registered experiments") && err.contains("mc-vs-nr"), "{err}");
}

#[test]
fn unknown_config_field_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.json");
    fs::write(&cfg, r#"{"experiment": "mc-vs-nr", "sed": 3}"#).unwrap();
    assert!(!lab().arg("run").arg(&cfg).output().unwrap().status.success());
}

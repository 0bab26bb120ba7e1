use std::path::Path;
use std::process::{Command, Output};

fn ltlrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltlrl")).args(args).output().unwrap()
}

fn config_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn config_error_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config_path("flatworld1.toml"))
        .unwrap()
        .replace("gamma = 0.95", "gamma = 1.5")
        .replace("../fixtures/fgy.ldba", "builtin:fgy");
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, text).unwrap();
    let o = ltlrl(&["train", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("learner.gamma"), "{}", stderr(&o));

    let o = ltlrl(&["train", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn train_flatworld_writes_every_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = ltlrl(&["train", &config_path("flatworld1.toml"), "--out", out.to_str().unwrap(), "--jobs", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("median episodes_to_threshold lcer"));

    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let rows: Vec<&str> = summary.lines().collect();
    assert_eq!(rows[0], "variant,seed,episodes_to_threshold,final_p_sat");
    assert_eq!(rows.len(), 21);
    for r in rows.iter().filter(|r| r.starts_with("lcer,")) {
        assert!(r.ends_with(",1"), "{r}");
    }

    let curves = std::fs::read_to_string(out.join("curves.csv")).unwrap();
    assert_eq!(curves.lines().count(), 1 + 20 * 1000);
    let svg = std::fs::read_to_string(out.join("curves.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn verify_and_inspect_exit_codes() {
    let o = ltlrl(&["verify", "all"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(ltlrl(&["verify", "nonsense"]).status.code(), Some(2));

    assert_eq!(ltlrl(&["inspect", "builtin:fgy", "FGy"]).status.code(), Some(0));
    assert_eq!(ltlrl(&["inspect", "builtin:cycle_yr", "FGy"]).status.code(), Some(1));
    assert_eq!(ltlrl(&["inspect", "builtin:fgy", "G ("]).status.code(), Some(2));
}

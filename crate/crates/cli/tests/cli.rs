use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ising-peel"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ising-peel-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--precision", "256"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.starts_with("name,pass,detail"));
    assert!(!s.contains(",false,"));
}

#[test]
fn constants_json_encodes_critical_nu() {
    let o = run(&["constants", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let list = v["constants"].as_array().unwrap();
    let nu = list.iter().find(|e| e["name"] == "nu_c").unwrap();
    assert_eq!(nu["exact"], serde_json::json!({ "a_num": 1, "a_den": 1, "b_num": 2, "b_den": 1 }));
    let tc = list.iter().find(|e| e["name"] == "t_c").unwrap();
    assert!(tc["exact"].is_null());
    assert!(tc["decimal"].as_str().unwrap().starts_with("0.0131"));
}

#[test]
fn sample_is_deterministic_and_echoes_the_seed() {
    let args = ["sample", "--regime", "full", "--steps", "10", "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("path_id,seed,stop_reason,stop_time,x_final,y_final,min_x,min_y"));
    assert!(lines.next().unwrap().starts_with("0,7,fixed_steps,10,"));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let args = ["sample", "--regime", "half", "--p", "50", "--stopping", "tm:5,steps:5000", "--paths", "16", "--seed", "11"];
    let one = run(&[&["--threads", "1"], &args[..]].concat());
    let many = run(&[&["--threads", "3"], &args[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["sample", "--regime", "full", "--steps", "10"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--regime", "full", "--seed", "1", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["laws", "--regime", "half"]).status.code(), Some(2));
    assert_eq!(run(&["experiment", "no_such_thing"]).status.code(), Some(2));
    assert_eq!(run(&["experiment", "drift"]).status.code(), Some(2));
    assert_eq!(run(&["coeffs", "--format", "text"]).status.code(), Some(2));
}

#[test]
fn sampled_maps_validate_in_both_formats() {
    let dir = scratch("maps");
    for (fmt, file) in [("text", "m.txt"), ("json", "m.json")] {
        let path = dir.join(file);
        let out = path.to_str().unwrap();
        let o = run(&["map-sample", "--p", "2", "--q", "1", "--n", "5", "--seed", "3", "--format", fmt, "--out", out]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let ok = run(&["map-validate", out, "--p", "2", "--q", "1", "--faces", "5"]);
        assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
        let bad = run(&["map-validate", out, "--faces", "6"]);
        assert_eq!(bad.status.code(), Some(1));
    }
    let text = std::fs::read_to_string(dir.join("m.txt")).unwrap();
    assert!(text.starts_with("# seed 3\n"));
}

#[test]
fn experiment_config_with_flag_override() {
    let dir = scratch("exp");
    let cfg = dir.join("tail.toml");
    std::fs::write(&cfg, "experiment = \"tail_exponents\"\nk_lo = 20\nk_hi = 100\ntolerance = 0.5\n").unwrap();
    let out = dir.join("reports");
    let o = run(&["experiment", "tail_exponents", "--config", cfg.to_str().unwrap(), "--k-hi", "200", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("tail_exponents.json")).unwrap()).unwrap();
    let first = &json["results"][0];
    assert_eq!(first["params"]["k_hi"], 200.0);
    assert_eq!(first["params"]["k_lo"], 20.0);
    assert!(out.join("tail_exponents.csv").exists());
    // a config written for another experiment is refused
    let o = run(&["experiment", "cm_limit", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_experiment_exits_one() {
    let o = run(&["experiment", "tail_exponents", "--tolerance", "0.001"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("tail_exponents,slope_x,"));
}

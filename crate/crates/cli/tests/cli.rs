use std::io::Write;
use std::process::{Command, Output};

fn stpro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stpro")).args(args).env_remove("STPRO_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scenario(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const PERTURBED: &[&str] =
    &["check", "cosheaf", "--K", "z12", "--phi", "A3", "--alpha", "e1-e2", "--ks", "3,4", "--depth", "2", "--perturb", "1:1:2"];

#[test]
fn empty_scenario_passes() {
    let f = scenario("# nothing\nseed = 4\n");
    let o = stpro(&["run", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"type":"summary","version":"0.1.0","entries":0,"pass":0,"fail":0,"inconclusive":0,"status":"pass"}"#);
}

#[test]
fn unknown_ring_tag_is_a_located_config_error() {
    let f = scenario("[bad]\ncheck = oddform\nK = q7\n");
    let o = stpro(&["run", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":3:") && err.contains("\"q7\""), "{err}");
}

#[test]
fn unknown_key_is_rejected() {
    let o = stpro(&["check", "gluing", "--algebra", "m4:z12", "--ks", "3,4", "--depht", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("depht"));
}

#[test]
fn roots_subcommand() {
    let o = stpro(&["roots", "BC2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("12 roots"), "{}", stdout(&o));
}

#[test]
fn failure_replays_from_its_report() {
    let o = stpro(&[PERTURBED, &["--format", "json"]].concat());
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains(r#""replay":"#)).expect("a failing outcome");
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    let cmd = v["replay"].as_str().unwrap();
    assert!(cmd.starts_with("stpro replay --spec '"));
    // recover the argv the shell would see
    let spec_start = cmd.find("--spec '").unwrap() + 8;
    let spec_end = cmd[spec_start..].find("' --identity").unwrap() + spec_start;
    let spec = &cmd[spec_start..spec_end];
    let identity = v["identity"].as_str().unwrap();
    let index = v["witness"]["index"].as_u64().unwrap().to_string();
    let r = stpro(&["replay", "--spec", spec, "--identity", identity, "--index", &index]);
    assert_eq!(r.status.code(), Some(1));
    let text = stdout(&r);
    assert!(text.contains("(1 evaluated)"), "{text}");
    assert!(text.contains(v["witness"]["detail"].as_str().unwrap()), "{text}");
}

#[test]
fn expected_failures_count_as_passing() {
    let f = scenario(
        "[neg]\ncheck = cosheaf\nK = z12\nphi = A3\nalpha = e1-e2\nks = 3,4\ndepth = 2\nperturb = 1:1:2\nexpect = fail\n",
    );
    let o = stpro(&["run", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn enumeration_overflow_is_inconclusive() {
    let o = stpro(&["check", "cosheaf", "--K", "z12", "--phi", "A3", "--alpha", "e1-e2", "--ks", "3,4", "--limit", "2"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn machine_report_is_stable_and_seed_comes_from_env() {
    let f = scenario("[g]\ncheck = gauss\nalgebra = m3:z8\ntrials = 50\n[w]\ncheck = gluing\nalgebra = m3:z12\nks = 3,4\ndepth = 2\n");
    let p = f.path().to_str().unwrap();
    let a = stpro(&["run", p, "--format", "json", "--threads", "1"]);
    let b = stpro(&["run", p, "--format", "json", "--threads", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_stpro")).args(["run", p, "--format", "json"]).env("STPRO_SEED", "77").output().unwrap();
    assert!(stdout(&c).contains(r#""seed":77"#));
    assert!(!stdout(&a).contains("elapsed"));
}

#[test]
fn json_and_text_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let (j, t) = (dir.path().join("r.jsonl"), dir.path().join("r.txt"));
    let o = stpro(&["roots", "A2", "--json", j.to_str().unwrap(), "--text", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(j).unwrap().ends_with("\"status\":\"pass\"}\n"));
    assert!(std::fs::read_to_string(t).unwrap().contains("closed under reflections"));
}

#[test]
fn bundled_suite_prints() {
    let o = stpro(&["run", "paper-suite", "--print"]);
    assert!(stdout(&o).contains("[enumerate-a3-f2]"));
}

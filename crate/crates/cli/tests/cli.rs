use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn opcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opcalc")).args(args).env_remove("OPCALC_THREADS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("opcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn jacobi_on_cohomology_passes() {
    let out = opcalc(&["verify", "jacobi", "--ring", "curve-cohomology", "--genus", "2", "--max-index", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["suite"], "jacobi");
    assert!(r["checked"].as_u64().unwrap() > 0);
    assert_eq!(r["details"]["invocation"], "verify jacobi --ring curve-cohomology --genus 2 --max-index 3");
    assert!(r.get("elapsed_ms").is_none());
}

#[test]
fn tau_pullback_reports_both_routes() {
    let out = opcalc(&["verify", "tau-pullback", "--k", "3", "--genus", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let r = json(&out);
    fn find<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
        v["details"].get(key).or_else(|| v["parts"].as_array()?.iter().find_map(|p| find(p, key)))
    }
    let closed = find(&r, "closed_k3").unwrap_or_else(|| panic!("{text}"));
    assert_eq!(Some(closed), find(&r, "operator_k3"));
}

#[test]
fn quick_run_of_everything_passes() {
    let out = opcalc(&["verify", "all", "--quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["status"], "pass");
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["verify", "x-sl2", "--quick"];
    let a = opcalc(&args);
    let b = opcalc(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_opcalc")).args(args).env("OPCALC_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn out_file_and_timing() {
    let path = scratch("report.json");
    let out = opcalc(&["verify", "combinat", "--quick", "--timing", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r["elapsed_ms"].is_u64());
}

#[test]
fn compute_expression() {
    let out = opcalc(&["compute", "expr", "[P(0,1;1), P(1,0;1)]"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["value"], "P(0,0; 1)");
    assert_eq!(r["target"], "expr");
    let out = opcalc(&["compute", "expr", "--ring", "curve-chow", "P(1,0; p0*p0)"]);
    assert_eq!(json(&out)["value"], "(-psi)*P(1,0; p0)");
}

#[test]
fn tau_pullback_compute_agrees() {
    let out = opcalc(&["compute", "tau-pullback", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["agree"], true);
}

#[test]
fn usage_and_input_errors_exit_2() {
    for args in [
        &["verify", "no-such-suite"][..],
        &["compute", "expr", "[P(1,1;1)"],
        &["compute", "expr", "x_1(1) + P(1,0;1)"],
        &["verify", "jacobi", "--ring", "nope"],
        &["verify", "jacobi", "--genus", "0"],
        &["show", "ring", "--ring-file", "/nonexistent/ring.txt"],
        &["frobnicate"],
    ] {
        let out = opcalc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = opcalc(&["compute", "expr", "[P(1,1;1)"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 10"));
}

#[test]
fn bad_thread_count_exits_2() {
    for v in ["0", "many"] {
        let out = Command::new(env!("CARGO_BIN_EXE_opcalc"))
            .args(["verify", "combinat", "--quick"])
            .env("OPCALC_THREADS", v)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "OPCALC_THREADS={v}");
    }
}

#[test]
fn ring_file_round_trip() {
    let shown = opcalc(&["show", "ring", "--ring", "curve-chow", "--genus", "3"]);
    assert_eq!(shown.status.code(), Some(0));
    let path = scratch("chow3.ring");
    std::fs::write(&path, &shown.stdout).unwrap();
    let again = opcalc(&["show", "ring", "--ring-file", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0), "{}", String::from_utf8_lossy(&again.stderr));
    assert_eq!(shown.stdout, again.stdout);

    let a = opcalc(&["compute", "expr", "--ring", "curve-chow", "--genus", "3", "[P(2,1;K), P(1,2;p0)]"]);
    let b = opcalc(&["compute", "expr", "--ring-file", path.to_str().unwrap(), "[P(2,1;K), P(1,2;p0)]"]);
    assert_eq!(json(&a)["value"], json(&b)["value"]);
}

#[test]
fn show_operator_as_differential_operator() {
    let out = opcalc(&["show", "op", "--ring", "curve-chow", "--as-diffop", "P(1,1;p0)"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("d[x_1("));
}

#[test]
fn suites_are_listed() {
    let out = opcalc(&["show", "suites"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for s in ["jacobi", "gross-schoen", "taut-homomorphism", "all"] {
        assert!(text.contains(s), "{s}");
    }
}

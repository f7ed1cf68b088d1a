use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn twoexact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoexact")).args(args).output().expect("binary runs")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn puppe_exact_fixture_exits_zero() {
    let out = twoexact(&["check-exact", "--mode", "puppe", &path("pb2.2cat.json")]);
    assert_eq!(out.status.code(), Some(0));
    let certs = lines(&out);
    assert!(certs.iter().all(|c| c["status"] == "pass"));
    assert!(certs.iter().all(|c| c["caps"]["candidates"] == 200_000));
}

#[test]
fn pointed_sets_fail_at_factorization() {
    let out = twoexact(&["check-exact", "--mode", "puppe", &path("ps2.2cat.json")]);
    assert_eq!(out.status.code(), Some(1));
    let last = lines(&out).pop().unwrap();
    assert_eq!(last["status"], "fail");
    assert!(last["counterexample"]["clause"].as_str().unwrap().contains("factorization"));
}

#[test]
fn dangling_reference_is_an_input_error() {
    let out = twoexact(&["validate", &path("broken.2cat.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("f9"));
}

#[test]
fn unknown_flag_prints_usage() {
    let out = twoexact(&["check-exact", "--frobnicate", &path("pb2.2cat.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn tiny_cap_is_inconclusive() {
    let out = twoexact(&["--cap", "10", "check-exact", "--mode", "puppe", &path("pb2.2cat.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(lines(&out).iter().all(|c| c["caps"]["instances"] == 10));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["check-exact", "--mode", "grandis", "--ideal", &path("ct22.zero.2cat.json"), &path("ct22.2cat.json")];
    assert_eq!(twoexact(&args).stdout, twoexact(&args).stdout);
    let gen = ["gen", "pb2", "zero-ideal"];
    assert_eq!(twoexact(&gen).stdout, twoexact(&gen).stdout);
}

#[test]
fn generated_fixtures_match_shipped_files() {
    for (args, file) in [(vec!["gen", "pb2"], "pb2.2cat.json"), (vec!["gen", "ps2", "zero-ideal"], "ps2.zero.2cat.json")] {
        let out = twoexact(&args);
        assert_eq!(out.stdout, std::fs::read(fixture(file)).unwrap(), "{file}");
    }
}

#[test]
fn bundle_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.2cat.json");
    let back = dir.path().join("ideal.2cat.json");
    let (t, zero) = (path("pb2.2cat.json"), path("pb2.zero.2cat.json"));
    let b = bundle.to_str().unwrap();
    assert_eq!(twoexact(&["fs-from-ideal", &t, "--ideal", &zero, "--out", b]).status.code(), Some(0));
    assert_eq!(twoexact(&["check-exact", &t, "--mode", "grandis", "--fs", b]).status.code(), Some(0));
    assert_eq!(twoexact(&["ideal-from-fs", &t, "--fs", b, "--out", back.to_str().unwrap()]).status.code(), Some(0));
    let eq = twoexact(&["equiv-ideals", &t, back.to_str().unwrap(), "--ideal", &zero]);
    assert_eq!(eq.status.code(), Some(0));
}

#[test]
fn mutants_fail_their_validators() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.2cat.json");
    let ms = m.to_str().unwrap();
    let (t, zero) = (path("pb2.2cat.json"), path("pb2.zero.2cat.json"));
    twoexact(&["mutate", &t, "--op", "drop-null-2cell", "--ideal", &zero, "--seed", "3", "--out", ms]);
    let out = twoexact(&["check-ideal", &t, "--ideal", ms]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(lines(&out)[0]["counterexample"]["clause"], "closure-id2");

    let lo = path("loop-on-null.2cat.json");
    twoexact(&["mutate", &lo, "--op", "retarget-vcomp", "--out", ms]);
    assert_eq!(twoexact(&["validate", ms]).status.code(), Some(1));

    let pb1 = path("pb1.2cat.json");
    twoexact(&["mutate", &pb1, "--op", "remove-eta-inverse", "--out", ms]);
    let out = twoexact(&["validate", &pb1, ms]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(lines(&out)[1]["counterexample"]["clause"], "component-equivalence");

    assert_eq!(twoexact(&["mutate", &pb1, "--op", "no-such-op"]).status.code(), Some(2));
}

#[test]
fn fibration_and_rofs_on_the_cyclic_tower() {
    let (t, fs, zero) = (path("ct22.2cat.json"), path("ct22.image-fs.2cat.json"), path("ct22.zero.2cat.json"));
    for dir in ["dom", "cod"] {
        assert_eq!(twoexact(&["check-fibration", &t, "--fs", &fs, "--direction", dir]).status.code(), Some(0));
    }
    assert_eq!(twoexact(&["check-fs", &t, "--fs", &fs]).status.code(), Some(0));
    assert_eq!(twoexact(&["check-rofs", &t, "--ideal", &zero, "--fs", &fs]).status.code(), Some(0));
}

#[test]
fn one_categorical_oracle() {
    let c = path("ct22.1cat.2cat.json");
    assert_eq!(twoexact(&["oracle-1cat", &c, "--ideal", &path("ct22.zero1.2cat.json")]).status.code(), Some(0));
    assert_eq!(twoexact(&["oracle-1cat", &path("ps2.2cat.json"), "--mode", "puppe"]).status.code(), Some(1));
}

#[test]
fn searches_report_witnesses() {
    let (t, zero) = (path("pb2.2cat.json"), path("pb2.zero.2cat.json"));
    let out = twoexact(&["kernel", &t, "pb2>1:__", "--ideal", &zero]);
    assert_eq!(out.status.code(), Some(0));
    assert!(lines(&out)[0]["witness"].as_array().is_some_and(|w| !w.is_empty()));
    assert_eq!(twoexact(&["cokernel", &t, "pb2>1:__", "--ideal", &zero]).status.code(), Some(0));
    let out = twoexact(&["three-pieces", &t, "pb2>1:__", "--ideal", &zero]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(twoexact(&["kernel", &t, "nope", "--ideal", &zero]).status.code(), Some(2));
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use shiftrecon_core::io::from_json;
use shiftrecon_core::{FiniteDynSys, ObservedSystem, ReconResult, SlidingBlockCode, Symbol, TimeSeriesData};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftrecon")).args(args).output().expect("binary runs")
}

fn run_fx(args: &[&str], files: &[&str]) -> Output {
    let paths: Vec<String> = files.iter().map(|f| fixture(f).to_string_lossy().into_owned()).collect();
    let mut all: Vec<&str> = args.to_vec();
    all.extend(paths.iter().map(String::as_str));
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn error_json(o: &Output) -> serde_json::Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.lines().last().unwrap()).expect("machine-readable error")
}

#[test]
fn golden_mean_word_counts() {
    let o = run_fx(&["words", "--depth", "3"], &["golden-mean.json"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("sizes: 2,3,5,8"), "{out}");
    assert!(out.contains("level 1: 3 [0,0 0,1 1,0]"));
}

#[test]
fn bad_tsd_morphism_exits_one_and_names_the_failure() {
    let o = run_fx(&["check-morphism", "--kind", "tsd"], &["tsd-morphism-bad.json", "tsd-x.json", "tsd-y.json"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("FAIL"));
    assert!(out.contains("level 1: image 1,1 of 0,0 is not in the target"), "{out}");
}

#[test]
fn valid_morphisms_pass() {
    let obs = run_fx(&["check-morphism", "--kind", "obs"], &["obs-c6-to-c3.json", "c6-mod3.json", "c3-identity.json"]);
    assert_eq!((code(&obs), stdout(&obs).as_str()), (0, "PASS\n"));
    let sbc = run_fx(&["check-morphism", "--kind", "sbc"], &["code-xor.json", "golden-mean.json", "full-shift.json"]);
    assert_eq!(code(&sbc), 0);
    let tsd = run_fx(
        &["check-morphism", "--kind", "tsd"],
        &["tsd-morphism-xor.json", "tsd-golden-mean.json", "tsd-full-shift.json"],
    );
    assert_eq!(code(&tsd), 0, "{}", stdout(&tsd));
}

#[test]
fn sbc_leaving_the_target_fails() {
    let o =
        run_fx(&["check-morphism", "--kind", "sbc"], &["code-identity.json", "full-shift.json", "golden-mean.json"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("image 1,1 of 1,1 is not a word of the target"));
}

#[test]
fn random_consistency_campaign() {
    let args = ["consistency", "--random", "200", "--max-states", "8", "--seed", "7"];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a).lines().last(), Some("200/200 PASS"));
    assert_eq!(stdout(&a).lines().count(), 201);
    // byte-identical on a second run
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn consistency_of_a_system_file() {
    let o = run_fx(&["consistency"], &["transient.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("1/1 PASS\n"));
}

#[test]
fn random_campaign_requires_a_seed() {
    let o = run(&["consistency", "--random", "5"]);
    assert_eq!(code(&o), 2);
    assert_eq!(error_json(&o)["error"], "Usage");
}

#[test]
fn every_fixture_roundtrips_unchanged() {
    let dir = fixture("");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let o = run(&["roundtrip", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", p.display());
        assert_eq!(stdout(&o), fs::read_to_string(&p).unwrap(), "{} is not canonical", p.display());
        seen += 1;
    }
    assert!(seen >= 20);
}

#[test]
fn corrupted_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    fs::write(&p, "{\"states\": [\"0\", ").unwrap();
    let o = run(&["roundtrip", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert_eq!(error_json(&o)["error"], "Format");
    assert!(o.stdout.is_empty());
}

#[test]
fn unsorted_system_is_canonicalized() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("sys.json");
    fs::write(&p, r#"{"step": {"b": "a", "a": "b"}, "states": ["b", "a"]}"#).unwrap();
    let first = run(&["roundtrip", p.to_str().unwrap()]);
    assert_eq!(code(&first), 0);
    let canonical = stdout(&first);
    assert!(canonical.find("\"states\"").unwrap() < canonical.find("\"step\"").unwrap());
    assert!(canonical.contains("\"a\",\n    \"b\""));
    let q = dir.path().join("again.json");
    fs::write(&q, &canonical).unwrap();
    assert_eq!(stdout(&run(&["roundtrip", q.to_str().unwrap()])), canonical);
}

#[test]
fn missing_file_and_bad_flags_exit_two() {
    let o = run(&["words", "/nonexistent/p.json"]);
    assert_eq!((code(&o), error_json(&o)["error"].as_str()), (2, Some("Io")));
    let o = run_fx(&["words", "--no-such-flag"], &["golden-mean.json"]);
    assert_eq!(code(&o), 2);
    let o = run_fx(&["subsample", "--dt", "0"], &["c6.json"]);
    assert_eq!(code(&o), 2);
    let o = run_fx(&["words"], &["c6.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn generate_then_reconstruct_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let tsd = dir.path().join("x.json");
    let rec = dir.path().join("r.json");
    let o = run_fx(&["generate", "--horizon", "3", "--out", tsd.to_str().unwrap()], &["c6-mod3.json"]);
    assert_eq!(code(&o), 0);
    let x: TimeSeriesData = from_json(&fs::read_to_string(&tsd).unwrap()).unwrap();
    assert_eq!(x.levels()[0].len(), 3);
    assert!(x.validate().is_empty());

    let o = run(&["reconstruct", tsd.to_str().unwrap(), "--order", "1", "--out", rec.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r: ReconResult = from_json(&fs::read_to_string(&rec).unwrap()).unwrap();
    assert_eq!(r.order, 1);
    assert_eq!(r.system.unwrap().sys().len(), 3);
}

#[test]
fn generate_from_a_stream_and_a_presentation() {
    let o = run_fx(&["generate", "--horizon", "3"], &["stream-0110.txt"]);
    let x: TimeSeriesData = from_json(&stdout(&o)).unwrap();
    assert_eq!(x.levels()[3].len(), 1);
    let o = run_fx(&["generate", "--horizon", "2"], &["golden-mean.json"]);
    let x: TimeSeriesData = from_json(&stdout(&o)).unwrap();
    assert_eq!(x.levels()[2].len(), 5);
}

#[test]
fn pruned_reconstruction_is_flagged() {
    let o = run_fx(&["reconstruct"], &["tsd-stream-0110.json"]);
    assert_eq!(code(&o), 0);
    let r: ReconResult = from_json(&stdout(&o)).unwrap();
    assert!(r.presentation.is_empty());
    assert!(String::from_utf8(o.stderr).unwrap().contains("empty reconstruction"));
}

#[test]
fn compose_two_shifts() {
    let o = run_fx(&["compose", "--kind", "sbc"], &["code-shift.json", "code-shift.json"]);
    assert_eq!(code(&o), 0);
    let c: SlidingBlockCode = from_json(&stdout(&o)).unwrap();
    assert_eq!(c.window(), 2);
    let s: Vec<Symbol> = "0110".chars().map(|ch| Symbol::Atom(ch.to_string())).collect();
    let out: String = c.apply(&s).unwrap().iter().map(ToString::to_string).collect();
    assert_eq!(out, "10");
}

#[test]
fn compose_tsd_morphisms_adds_jumps() {
    let o = run_fx(&["compose", "--kind", "tsd"], &["tsd-morphism-xor.json", "tsd-morphism-xor.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"jump\": 2"));
}

#[test]
fn coequalizer_of_identity_and_swap() {
    let o = run_fx(&["colimit"], &["coequalizer.json"]);
    let sys: FiniteDynSys = from_json(&stdout(&o)).unwrap();
    assert_eq!(sys.len(), 1);
}

#[test]
fn subsample_and_delay_embed() {
    let o = run_fx(&["subsample", "--dt", "2"], &["c6.json"]);
    let sys: FiniteDynSys = from_json(&stdout(&o)).unwrap();
    assert_eq!(sys.step(&"0".parse().unwrap()).unwrap().as_str(), "2");

    let o = run_fx(&["subsample", "--dt", "2"], &["c6-mod3.json"]);
    let x: ObservedSystem = from_json(&stdout(&o)).unwrap();
    assert_eq!(x.sys().len(), 3);

    let o = run_fx(&["delay-embed", "-k", "2"], &["c4-parity.json"]);
    assert_eq!(code(&o), 0);
    let x: ObservedSystem = from_json(&stdout(&o)).unwrap();
    let tuples: Vec<String> = x.alphabet().iter().map(ToString::to_string).collect();
    assert_eq!(tuples, ["(0;1)", "(1;0)"]);
}

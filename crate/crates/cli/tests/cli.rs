use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use modelacq::domains::BLOCKSWORLD_4;
use modelacq::extraction::extract_observer;
use modelacq::observation::{tokenize, ObservedTraceList, TokenType, TokenizeParams};
use modelacq::pddl::parse_domain;
use modelacq::recommender::{nearest_techniques, recommend, Report, Taxonomy};
use modelacq::trace::TraceList;
use modelacq::tracegen::random_walk;
use modelacq::LearnedModel;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modelacq"))
        .args(args)
        .env_remove("MACQ_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path).unwrap()
}

/// generate -> tokenize(identity) -> extract(observer), all through files.
fn observer_pipeline(dir: &TempDir, seed: &str) {
    ok(&["--seed", seed, "generate", "--bundled", "blocksworld-4", "--length", "12", "--count", "3", "-o", &p(dir, "t.json")]);
    ok(&["--seed", seed, "tokenize", "-i", &p(dir, "t.json"), "--type", "identity", "-o", &p(dir, "o.json")]);
    ok(&["extract", "-i", &p(dir, "o.json"), "--method", "observer", "--out-dir", &p(dir, "model")]);
}

#[test]
fn observer_pddl_reparses_to_the_same_model() {
    let dir = TempDir::new().unwrap();
    observer_pipeline(&dir, "5");
    let pddl = read(dir.path().join("model/model.pddl"));
    let json: LearnedModel = serde_json::from_str(&read(dir.path().join("model/model.json"))).unwrap();
    let parsed = LearnedModel::from_domain(&parse_domain(&pddl).unwrap());
    assert!(parsed.same_theory(&json));
    assert!(read(dir.path().join("model/details.txt")).starts_with("Actions:\n"));
}

#[test]
fn partial_tokenization_records_percent_missing() {
    let dir = TempDir::new().unwrap();
    ok(&["generate", "--bundled", "rover-1", "--length", "8", "-o", &p(&dir, "t.json")]);
    ok(&["tokenize", "-i", &p(&dir, "t.json"), "--type", "partial", "--percent-missing", "0.6", "-o", &p(&dir, "o.json")]);
    let obs = ObservedTraceList::from_json(&read(dir.path().join("o.json"))).unwrap();
    assert_eq!(obs.token_type, TokenType::PartialState);
    assert_eq!(obs.provenance.last().unwrap().percent_missing, Some(0.6));
}

#[test]
fn observer_on_state_ids_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    ok(&["generate", "--bundled", "gripper-2", "-o", &p(&dir, "t.json")]);
    ok(&["tokenize", "-i", &p(&dir, "t.json"), "--type", "state_id", "-o", &p(&dir, "o.json")]);
    let out = run(&["extract", "-i", &p(&dir, "o.json"), "--method", "observer", "--out-dir", &p(&dir, "m")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("state_id"));
    assert!(!dir.path().join("m").exists());
}

#[test]
fn staged_run_equals_in_process_run() {
    let dir = TempDir::new().unwrap();
    observer_pipeline(&dir, "9");
    let task = BLOCKSWORLD_4.task().unwrap();
    let list = random_walk(&task, 12, 3, 9);
    assert_eq!(TraceList::from_json(&read(dir.path().join("t.json"))).unwrap(), list);
    let obs = tokenize(&list, TokenType::Identity, &TokenizeParams::default(), 9).unwrap();
    assert_eq!(read(dir.path().join("o.json")), obs.to_json());
    let model = extract_observer(&obs).unwrap();
    let staged: LearnedModel = serde_json::from_str(&read(dir.path().join("model/model.json"))).unwrap();
    assert_eq!(staged, model);
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for dir in [&a, &b] {
        ok(&["--seed", "4", "generate", "--bundled", "blocksworld-4", "--method", "goals", "-k", "6", "-g", "2", "--num-goals", "2", "-o", &p(dir, "t.json")]);
        ok(&["--seed", "4", "tokenize", "-i", &p(dir, "t.json"), "--type", "partial", "--percent-missing", "0.3", "-o", &p(dir, "o.json")]);
        ok(&["extract", "-i", &p(dir, "o.json"), "--method", "arms", "--out-dir", &p(dir, "m"), "--wcnf", &p(dir, "a.wcnf")]);
    }
    for f in ["t.json", "o.json", "m/model.json", "m/model.pddl", "m/details.txt", "a.wcnf"] {
        assert_eq!(read(a.path().join(f)), read(b.path().join(f)), "{f}");
    }
}

#[test]
fn seed_flag_and_environment_agree() {
    let dir = TempDir::new().unwrap();
    ok(&["--seed", "11", "generate", "--bundled", "gripper-2", "-o", &p(&dir, "a.json")]);
    let out = Command::new(env!("CARGO_BIN_EXE_modelacq"))
        .args(["generate", "--bundled", "gripper-2", "-o", &p(&dir, "b.json")])
        .env("MACQ_SEED", "11")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(read(dir.path().join("a.json")), read(dir.path().join("b.json")));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = run(&["tokenize", "--type", "partial"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--input"));
    let out = run(&["tokenize", "-i", "/definitely/missing.json", "--type", "partial", "-o", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--input"));
    let out = run(&["extract", "-i", "x", "--method", "nonsense", "--out-dir", "y"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn recommend_json_matches_library() {
    let dir = TempDir::new().unwrap();
    ok(&["recommend", "--format", "json", "-o", &p(&dir, "r.json"), "--dimacs", &p(&dir, "t.cnf")]);
    let t = Taxonomy::shipped();
    let r = recommend(&t.schema, &t.entries, &t.preferences).unwrap();
    let n = nearest_techniques(&r.assignment, &t.entries, 3);
    assert_eq!(read(dir.path().join("r.json")), Report::new(&t.schema, &t.entries, &r, &n).to_json());
    assert!(read(dir.path().join("t.cnf")).starts_with("p cnf"));
}

#[test]
fn custom_preferences_and_validation() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("prefs.txt"), "# prefer partial data\nfluents_partial, action_labels\n").unwrap();
    let out = ok(&["recommend", "--prefs", &p(&dir, "prefs.txt")]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("Nearest techniques"));
    fs::write(dir.path().join("bad.txt"), "no_such_feature\n").unwrap();
    assert_eq!(run(&["recommend", "--prefs", &p(&dir, "bad.txt")]).status.code(), Some(1));

    let out = ok(&["validate"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("arms: ok"));
    let mut broken = Taxonomy::shipped().to_toml();
    broken.push_str("\n[[entry]]\nid = \"impossible\"\ntitle = \"x\"\ncube = [\"model_typed\", \"!model_parameterized\"]\n");
    fs::write(dir.path().join("tax.toml"), broken).unwrap();
    let out = run(&["validate", "--taxonomy", &p(&dir, "tax.toml")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("impossible: inconsistent"));
}

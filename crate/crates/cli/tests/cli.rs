use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use qpencil::{random, Gf};
use qpencil_cli::doc::PencilDocument;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn qpencil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpencil")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn normalform_of_the_m1_example() {
    let out = qpencil(&["normalform", "--in", &fixture("m1_r00.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["a"], serde_json::json!([0, 1, 1, 1]));
    assert_eq!(v["r"], serde_json::json!([0, 0]));
}

#[test]
fn isomorphism_decisions() {
    let a = fixture("m1_r00.json");
    let no = json(&qpencil(&["isiso", "--in", &a, "--other", &fixture("m1_r01.json")]));
    assert_eq!(no["isomorphic"], Value::Bool(false));
    assert!(no["witness"].is_null());
    let yes = json(&qpencil(&["isiso", "--in", &a, "--other", &fixture("m1_r10.json")]));
    assert_eq!(yes["isomorphic"], Value::Bool(true));
    assert_eq!(yes["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    let out = qpencil(&["regular", "--in", &fixture("proportional.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "proportional_pair");

    let out = qpencil(&["canonical-plane", "--in", &fixture("m1_r00.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "plane_needs_larger_m");

    let out = qpencil(&["halfdisc", "--in", &fixture("missing.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extension_fields_are_reported() {
    let v = json(&qpencil(&["generators", "--in", &fixture("m1_r00.json")]));
    assert_eq!(v["count"], 4);
    assert_eq!(v["field"]["degree"], 2);
    assert_eq!(v["field"]["modulus"], 7);
    let v = json(&qpencil(&["reflections", "--in", &fixture("del_pezzo.json")]));
    assert_eq!(v["reflections"].as_array().unwrap().len(), 5);
}

#[test]
fn del_pezzo_outputs() {
    let dp = fixture("del_pezzo.json");
    let plane = json(&qpencil(&["canonical-plane", "--in", &dp]));
    assert_eq!(plane["basis"], serde_json::json!([[0, 1, 1, 0, 0]]));
    let gens = json(&qpencil(&["generators", "--in", &dp]));
    assert_eq!(gens["count"], 16);
    let lat = json(&qpencil(&["lattice", "--in", &dp]));
    assert_eq!(lat["signed_cartan"], Value::Bool(true));
    assert_eq!(lat["gram_det"], -1);
}

#[test]
fn output_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("qpencil-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("out.json");
    let dp = fixture("del_pezzo.json");
    let first = qpencil(&["autos", "--ext", "4", "--in", &dp]);
    let second = qpencil(&["autos", "--ext", "4", "--in", &dp]);
    assert_eq!(first.stdout, second.stdout);
    let out = qpencil(&["autos", "--ext", "4", "--in", &dp, "--out", target.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), first.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fixtures_are_canonical() {
    for name in ["m1_r00.json", "m1_r01.json", "m1_r10.json", "del_pezzo.json", "proportional.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(PencilDocument::parse(&text).unwrap().to_canonical_string(), text, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn documents_round_trip(k in 1u32..=3, m in 1usize..=3, seed in any::<u64>()) {
        let f = Gf::new(k).unwrap();
        let p = random::pencil(f, 2 * m + 1, &mut random::rng(seed));
        let doc = PencilDocument::from_pencil(&p);
        let text = doc.to_canonical_string();
        let back = PencilDocument::parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_canonical_string(), text);
        prop_assert_eq!(back.to_pencil().unwrap(), p);
    }
}

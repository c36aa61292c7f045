use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn tropk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropk")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn parse(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn p2() -> Value {
    json!({"rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "cones": [[0, 1], [1, 2], [2, 0]]})
}

#[test]
fn hypersurface_of_a_line() {
    let dir = TempDir::new().unwrap();
    let poly = write(dir.path(), "line.json", &json!({"vars": 2, "exponents": [[0, 0], [1, 0], [0, 1]]}));
    let out = tropk(&["hyp", poly.to_str().unwrap()]);
    assert!(out.status.success());
    let fan = parse(&out);
    assert_eq!(fan["rays"], json!([[-1, -1], [0, 1], [1, 0]]));
    assert_eq!(fan["cones"], json!([[0], [1], [2]]));

    let fan_path = write(dir.path(), "line-fan.json", &fan);
    let out = tropk(&["fp", "--fan", fan_path.to_str().unwrap(), "-p", "2"]);
    assert_eq!(parse(&out)["dim"], json!(0));
    let out = tropk(&["fp", "--fan", fan_path.to_str().unwrap(), "-p", "1"]);
    assert_eq!(parse(&out)["dim"], json!(2));
}

#[test]
fn gersten_matches_chow_on_the_plane() {
    let dir = TempDir::new().unwrap();
    let fan = write(dir.path(), "p2.json", &p2());
    let out = tropk(&["gersten", "--fan", fan.to_str().unwrap(), "-p", "1", "--check-chow"]);
    assert_eq!(out.status.code(), Some(0));
    let r = parse(&out);
    assert_eq!(r["top_cokernel"], json!(1));
    assert_eq!(r["chow_oracle"], json!(1));
    assert_eq!(r["match"], json!(true));
    assert_eq!(r["term_dims"], json!([2, 3]));
}

#[test]
fn emitted_fans_round_trip() {
    let dir = TempDir::new().unwrap();
    let fan = write(dir.path(), "p2.json", &p2());
    let out = tropk(&["refine", "--fan", fan.to_str().unwrap(), "--stellar", "1,1", "--random", "3", "--seed", "5"]);
    assert!(out.status.success());
    let again = write(dir.path(), "refined.json", &parse(&out));
    let out2 = tropk(&["refine", "--fan", again.to_str().unwrap()]);
    assert_eq!(out.stdout, out2.stdout);
}

#[test]
fn seeded_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let fan = write(dir.path(), "p2.json", &p2());
    let args = ["refine", "--fan", fan.to_str().unwrap(), "--random", "4", "--seed", "17"];
    let a = tropk(&args);
    let b = tropk(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = tropk(&["refine", "--fan", fan.to_str().unwrap(), "--random", "4", "--seed", "18"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = tropk(&["hyp", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(parse(&out)["error"], json!("InvalidInput"));

    let fan = write(dir.path(), "p2.json", &p2());
    let undecidable = write(
        dir.path(),
        "flag.json",
        &json!({"basis": [{"name": "b", "enclosure": ["1", "2"]}], "levels": [[["-3/2", "1"], "0"]]}),
    );
    let out = tropk(&["locate", "--fan", fan.to_str().unwrap(), "--flag", undecidable.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    let line = write(dir.path(), "line.json", &json!({"rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "cones": [[0], [1], [2]]}));
    let out = tropk(&["chow", "--fan", line.to_str().unwrap(), "-p", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(parse(&out)["error"], json!("NotComplete"));
}

#[test]
fn interval_depth_from_environment() {
    let dir = TempDir::new().unwrap();
    let fan = write(dir.path(), "p2.json", &p2());
    let flag = write(
        dir.path(),
        "flag.json",
        &json!({"basis": [{"name": "r2", "sqrt": "2"}], "levels": [[["-141421356/100000000", "1"], "0"]]}),
    );
    let run = |depth: &str| {
        Command::new(env!("CARGO_BIN_EXE_tropk"))
            .args(["locate", "--fan", fan.to_str().unwrap(), "--flag", flag.to_str().unwrap()])
            .env("TROPK_INTERVAL_DEPTH", depth)
            .output()
            .unwrap()
    };
    assert_eq!(run("4").status.code(), Some(3));
    let deep = run("80");
    assert_eq!(deep.status.code(), Some(0));
    assert_eq!(parse(&deep)["cone"]["rays"], json!([[1, 0]]));
}

#[test]
fn residues_and_transfers() {
    let dir = TempDir::new().unwrap();
    let steinberg = write(
        dir.path(),
        "st.json",
        &json!({"symbol": [{"roots": ["0"], "exps": [1]}, {"constant": "-1", "roots": ["1"], "exps": [1]}], "place": "inf"}),
    );
    let r = parse(&tropk(&["residue", steinberg.to_str().unwrap()]));
    assert_eq!(r, json!({"degree": 1, "primes": {}}));

    let contract = write(
        dir.path(),
        "rc.json",
        &json!({"fan": p2(), "tau": [], "sigma": [[1, 0]], "degree": 2, "omega": ["1"]}),
    );
    assert_eq!(parse(&tropk(&["residue", contract.to_str().unwrap()]))["residue"], json!(["1"]));

    let chart = write(dir.path(), "xy.json", &json!({"symbol": [[1, 0], [0, 1]]}));
    assert_eq!(parse(&tropk(&["residue", chart.to_str().unwrap()]))["zero"], json!(false));

    let unsplit = write(dir.path(), "u.json", &json!({"symbol": [{"roots": ["i"], "exps": [1]}], "place": "0"}));
    let out = tropk(&["residue", unsplit.to_str().unwrap()]);
    assert_eq!(parse(&out)["error"], json!("UnsplitFactor"));

    let t = write(dir.path(), "t.json", &json!({"basis": [[1, 0], [0, 3]], "p": 1, "element": ["1", "1"], "direction": "restrict"}));
    let r = parse(&tropk(&["transfer", t.to_str().unwrap()]));
    assert_eq!(r, json!({"index": "3", "result": ["1", "3"]}));
}

#[test]
fn valuation_commands() {
    let dir = TempDir::new().unwrap();
    let flag = write(dir.path(), "f.json", &json!({"levels": [[1, 0, 0], [2, 0, 0], [0, 1, 0]]}));
    let h = parse(&tropk(&["val-height", "--flag", flag.to_str().unwrap()]));
    assert_eq!(h["height"], json!(2));
    assert_eq!(h["consistent"], json!(true));
    let r = parse(&tropk(&["val-reduce", "--flag", flag.to_str().unwrap(), "--cut", "1"]));
    assert_eq!(r["height"], json!(1));
    assert_eq!(r["flag"]["levels"], json!([["1", "0", "0"]]));
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn tetra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetra"))
        .args(args)
        .output()
        .expect("spawn tetra")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tetra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_all_succeeds() {
    let o = tetra(&["verify-all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("NoEquivariantMap"), "{text}");
}

#[test]
fn verify_all_with_small_degree_bound() {
    let o = tetra(&["verify-all", "--max-degree", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn corrupted_ledger_fails_with_line_number() {
    let path = scratch("bad.ledger");
    std::fs::write(
        &path,
        "# d3\npage=3 from=(1,6) gen=Upsilon to=(4,4) image=T^2*s range=i>=1\npage=5 from=(1,4) gen=Lambda to=(5,0) image=U^3 range=i>=0\n",
    )
    .unwrap();
    let o = tetra(&["verify-all", "--ledger", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line 3"), "{}", stdout(&o));
}

#[test]
fn invalid_arguments_exit_with_error() {
    let o = tetra(&["solve-tetra", "--embedding", "cube:1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectral_pages_are_emitted() {
    let ascii = tetra(&["spectral", "--case", "sphere-z", "--emit-pages", "ascii"]);
    assert_eq!(ascii.status.code(), Some(0));
    let text = stdout(&ascii);
    for q in ["q=6", "q=4", "q=2", "q=0"] {
        assert!(text.contains(q), "{q} missing:\n{text}");
    }
    let json = tetra(&["spectral", "--case", "sphere-z", "--emit-pages", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).expect("valid json");
    assert!(v.is_object());
    let idx = tetra(&["spectral", "--case", "sphere-z", "--index"]);
    assert!(stdout(&idx).contains("<U^3>"), "{}", stdout(&idx));
}

#[test]
fn solver_json_round_trips_through_file() {
    let path = scratch("solve.json");
    let args = [
        "solve-tetra",
        "--embedding",
        "ellipsoid:1,1.3,0.7",
        "--format",
        "json",
        "--seed",
        "42",
    ];
    let o = tetra(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["certified"], serde_json::Value::Bool(true));
    assert_eq!(v["seed"], 42);
    let again = tetra(&args);
    assert_eq!(stdout(&again), written);
}

use std::fs;
use std::path::{Path, PathBuf};

use railcount::cli::run_with;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("railcount-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(std::iter::once("railcount").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    out
}

/// Compares against `tests/golden/<name>`; set `UPDATE_GOLDEN=1` to rewrite.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "golden file {name} differs");
}

#[test]
fn tuned_ibc_pipeline() {
    let sys = scratch("ibc6.json");
    let circuit = scratch("ibc6-circuit.json");
    let sys_s = sys.to_str().unwrap();
    let circuit_s = circuit.to_str().unwrap();
    ok(&["exemplar", "ibc", "--n", "6", "--gates", "tuned", "--emit", sys_s]);
    ok(&["tiles", "check-layer", "--tileset", sys_s]);
    ok(&["tiles", "compile", "--tileset", sys_s, "--out", circuit_s]);
    let text = ok(&["circuit", "counter", "--in", circuit_s]);
    let value: usize = text
        .split_whitespace()
        .find_map(|w| w.strip_prefix("counter_value=").and_then(|v| v.parse().ok()))
        .unwrap_or_else(|| panic!("no counter value in {text:?}"));
    assert!(value <= 63, "{value}");
    assert_eq!(value, 63);
}

#[test]
fn classify_not_gate() {
    let path = scratch("not2.json");
    fs::write(&path, r#"{"n":2,"gates":[{"s":0,"i":0,"j":0,"table":[1,0]}]}"#).unwrap();
    let out = ok(&["circuit", "classify", "--in", path.to_str().unwrap()]);
    assert!(out.contains("Bijection Even"), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["circuit", "eval"]).0, 2);
    assert_eq!(run(&["perm", "classify", "--f", "0 7"]).0, 2);
    assert_eq!(run(&["circuit", "counter", "--in", "/nonexistent/c.json"]).0, 2);
}

#[test]
fn unclean_layer_exits_1() {
    let sys = scratch("zz-eps.json");
    ok(&["exemplar", "zigzag", "--n", "4", "--interp", "eps-top", "--emit", sys.to_str().unwrap()]);
    let (code, out, err) = run(&["tiles", "check-layer", "--tileset", sys.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}{err}");
}

#[test]
fn copy_render_golden() {
    let sys = scratch("copy3.json");
    ok(&["exemplar", "copy", "--n", "3", "--emit", sys.to_str().unwrap()]);
    let grid = ok(&["tiles", "render", "--tileset", sys.to_str().unwrap(), "--x", "5", "--layers", "2"]);
    golden("copy3-x5-layers2.txt", &grid);
}

#[test]
fn zigzag_circuit_render_golden() {
    let sys = scratch("zz6.json");
    let circuit = scratch("zz6-circuit.json");
    ok(&["exemplar", "zigzag", "--n", "6", "--emit", sys.to_str().unwrap()]);
    ok(&["tiles", "compile", "--tileset", sys.to_str().unwrap(), "--out", circuit.to_str().unwrap()]);
    let text = ok(&["circuit", "render", "--in", circuit.to_str().unwrap()]);
    golden("zigzag6-circuit.txt", &text);
    let c = railcount::io::parse_circuit(&fs::read_to_string(&circuit).unwrap()).unwrap();
    assert_eq!(c.sections(), 14);
}

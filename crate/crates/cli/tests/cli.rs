use std::path::Path;
use std::process::{Command, Output};

fn gvkit(args: &[&str]) -> Output {
    gvkit_with(args, None)
}

fn gvkit_with(args: &[&str], catalog: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gvkit"));
    cmd.args(args).env_remove("GVKIT_CATALOG_DIR");
    if let Some(dir) = catalog {
        cmd.env("GVKIT_CATALOG_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

const TINY: &str = "id = tiny\n[chart]\nkind = torus\ncoords = x, z\n[foliation]\nalpha = dz\ntransversal = e_z\n";

#[test]
fn list_shows_every_entry() {
    let o = gvkit(&["list"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for id in ["torus_linear", "torus_graph", "sl2_roussarie", "sl2_flow", "sl2xsl2_codim2", "heisenberg"] {
        assert!(out.lines().any(|l| l.starts_with(id)), "{id} missing from\n{out}");
    }
}

#[test]
fn compute_sl2_reports_minus_four() {
    let o = gvkit(&["compute", "sl2_roussarie"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("gv: -4\n"));

    let o = gvkit(&["compute", "sl2xsl2_codim2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["gv_coefficient"]["exact"], "-16");
    assert_eq!(v["q"], 2);
    for key in ["family", "gv", "tgv", "dgv", "igv", "normalization", "witnesses"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let w = &v["witnesses"][0];
    assert_eq!(w["lhs_hash"].as_str().unwrap().len(), 64);
    assert_eq!(w["residual_is_zero"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&gvkit(&["compute", "heisenberg"])), 4);
    assert_eq!(code(&gvkit(&["compute", "no_such_entry"])), 4);
    assert_eq!(code(&gvkit(&["verify"])), 3);
    assert_eq!(code(&gvkit(&["frobnicate"])), 3);
    assert_eq!(code(&gvkit(&["--help"])), 0);

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.gvk"),
        "id = bad\n[chart]\nkind = torus\ncoords = x\n[foliation]\nalpha = dx +\n",
    )
    .unwrap();
    let o = gvkit_with(&["list"], Some(dir.path()));
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.gvk:6:"));

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tiny.gvk"), format!("{TINY}[expected]\ngv = 1 [DERIVED] wrong on purpose\n"))
        .unwrap();
    let args = ["verify", "tiny", "--cases", "3", "--telescoping-cases", "1"];
    assert_eq!(code(&gvkit_with(&args, Some(dir.path()))), 0);
    let mut strict = args.to_vec();
    strict.push("--strict");
    let o = gvkit_with(&strict, Some(dir.path()));
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("FAIL expected.gv"));
}

#[test]
fn verify_codim_two_with_seed() {
    let o = gvkit(&["verify", "sl2xsl2_codim2", "--seed", "7", "--cases", "25", "--strict"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0, "{out}");
    assert!(out.contains("ok   telescoping"));
    assert!(out.contains("ok   expected.gv_coefficient"));
}

#[test]
fn verify_all_is_byte_identical_across_runs() {
    let args = ["verify", "--all", "--seed", "42"];
    let a = gvkit(&args);
    let b = gvkit(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.ends_with("summary: 7 entries, 7 passed, 0 failed\n"), "{out}");
}

#[test]
fn family_grid_writes_csv() {
    let o = gvkit(&["family-grid", "torus_graph", "--t0", "-1", "--t1", "1", "--steps", "4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,tgv");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "-1,0");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let o =
        gvkit(&["family-grid", "sl2_flow", "--t0", "0", "--t1", "1", "--steps", "2", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(path).unwrap(), "t,tgv\n0,0\n0.5,0\n1,0\n");
}

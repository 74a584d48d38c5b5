use std::path::Path;
use std::process::Command;

use holodisc::{RunConfig, RunReport};
use holodisc_core::diskops::io::{read_grid_function, read_vector_grid, write_grid_function};
use holodisc_core::diskops::{DiscGrid, GridFunction};

fn holodisc(args: &[&str], threads: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_holodisc"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("HOLODISC_THREADS", t);
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn cg_of_zeros_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let g = DiscGrid::new(8, 16).unwrap();
    let input = path(dir.path(), "zeros.csv");
    write_grid_function(&GridFunction::zeros(&g), std::fs::File::create(&input).unwrap()).unwrap();
    let out = path(dir.path(), "out.csv");
    let (code, _, err) = holodisc(&["cg", "--input", &input, "--out", &out], None);
    assert_eq!(code, 0, "{err}");
    let u = read_grid_function(std::fs::File::open(&out).unwrap()).unwrap();
    assert!(u.values.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn solve_disc_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "disc.csv");
    let (code, stdout, err) = holodisc(&["solve-disc", "--A", "const 0.3", "--seed", "zeta", "--out", &out], None);
    assert_eq!(code, 0, "{err}");
    let (g, comps, _) = read_vector_grid(std::fs::File::open(&out).unwrap()).unwrap();
    let e = g.nodes().iter().zip(&comps[0]).map(|(z, v)| (v - (z + 0.3 * z.conj())).norm()).fold(0.0, f64::max);
    assert!(e < 1e-8, "{e}");
    let report: RunReport = serde_json::from_str(&stdout).unwrap();
    assert!(report.passed());
    assert_eq!(RunConfig::from_text(&report.config).unwrap().a_spec, "const 0.3");
}

#[test]
fn malformed_wedge_exits_with_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.txt");
    std::fs::write(&w, "dim 2\ngraph 1 : 0.05 y1\n").unwrap();
    let (code, _, err) = holodisc(&["family", "--wedge", &w, "--c", "0,0.1", "--t", "1,1"], None);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, err) = holodisc(&["family", "--tol=-1"], None);
    assert_eq!(code, 2);
    assert!(err.contains("tol"), "{err}");
}

#[test]
fn family_and_lindelof_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.txt");
    std::fs::write(&w, "dim 2\ngraph 1 : 0.05 y1^2 ; 0.05 y2^2\ngraph 2 : 0.05 y1^2 ; 0.05 y2^2\n").unwrap();
    let (code, _, err) = holodisc(&["family", "--wedge", &w, "--c", "0,0.2", "--t", "1,1.2", "--grid", "32x64"], None);
    assert_eq!(code, 0, "{err}");
    let c1 = path(dir.path(), "c1.txt");
    let c2 = path(dir.path(), "c2.txt");
    std::fs::write(&c1, "dim 2\nterm 1 : -1 0 -1 0\n").unwrap();
    std::fs::write(&c2, "dim 2\nterm 1 : -1 0 -1 0\nterm 2 : 0 0.5 0 -0.3\n").unwrap();
    let f = path(dir.path(), "f.txt");
    std::fs::write(&f, "dim 2\nbound 10\ndbar_bound 0.2\npower_i 1 : 1 0\npoly : 0 0.1 zb1\n").unwrap();
    let (code, stdout, err) = holodisc(&["lindelof", "--F", &f, "--curve1", &c1, "--curve2", &c2], None);
    assert_eq!(code, 0, "{err}");
    let report: RunReport = serde_json::from_str(&stdout).unwrap();
    assert!(report.results["exponent"].as_f64().unwrap() > 0.4);
}

#[test]
fn fatou_payload_is_thread_independent() {
    let args = ["fatou", "--F", "power_i", "--edge-samples", "300", "--dirs", "16"];
    let (c1, s1, e1) = holodisc(&args, Some("1"));
    let (c2, s2, _) = holodisc(&args, Some("3"));
    assert_eq!(c1, 0, "{e1}");
    assert_eq!(c2, 0);
    let r1: RunReport = serde_json::from_str(&s1).unwrap();
    let r2: RunReport = serde_json::from_str(&s2).unwrap();
    assert_eq!(r1.payload_json(), r2.payload_json());
    assert_eq!(r1.results["exceptional"], 3);
}

#[test]
fn unknown_command_is_usage_error() {
    let (code, _, err) = holodisc(&["bogus"], None);
    assert_eq!(code, 2);
    assert!(err.contains("command"), "{err}");
}

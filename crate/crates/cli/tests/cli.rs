use std::path::PathBuf;
use std::process::{Command, Output};

use delpezzo::endo::{enumerate_lattice_automorphisms, PipelineReport, PreimageReport};
use delpezzo::lattice::PicLattice;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delpezzo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn matrix_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("delpezzo-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn enumeration_commands() {
    for (r, n) in [(1, 1), (4, 10), (6, 27), (7, 56)] {
        let v = json(&["lines", "--blowups", &r.to_string()]);
        assert_eq!(v["count"], n);
        assert_eq!(v["lines"].as_array().unwrap().len(), n);
    }
    let conics = json(&["conics", "--blowups", "4"]);
    assert_eq!(conics["count"], 5);
    for c in conics["conics"].as_array().unwrap() {
        assert_eq!(c["singular_fibers"].as_array().unwrap().len(), 3);
    }
    let g = json(&["graph", "--blowups", "4"]);
    assert_eq!(g["automorphisms"], 120);
    assert_eq!(g["girth"], 5);
    assert_eq!(g["regular_degree"], 3);
    let a = json(&["automorphisms", "--blowups", "4"]);
    assert_eq!(a["count"], 120);
    assert!(stdout(&["lines", "--blowups", "4"]).contains("10"));
}

#[test]
fn analyze_map_reports_both_degrees() {
    let v = json(&["analyze-map", "x0*x2 + x1^2, x1*x2 + x0^2, x0^2 + x1^2"]);
    assert_eq!(v["algebraic_degree"], 2);
    assert_eq!(v["topological_degree"]["topological_degree"], 3);
    assert_eq!(v["stated_topological_degree"], 4);
    assert_eq!(v["base_locus"]["rational_points"][0], "[0 : 0 : 1]");
    assert_eq!(v["resolutions"][0]["resolved"], true);
    let text = stdout(&["analyze-map", "x0*x2 + x1^2, x1*x2 + x0^2, x0^2 + x1^2"]);
    assert!(text.contains("topological degree: 3"));
    assert!(text.contains("stated degree in the literature: 4"));

    let cremona = json(&["analyze-map", "x1*x2, x0*x2, x0*x1", "--field", "10007"]);
    assert_eq!(cremona["topological_degree"]["topological_degree"], 1);
    assert_eq!(cremona["base_locus"]["geometric_count"], 3);
    assert_eq!(cremona["stated_topological_degree"], Value::Null);
}

#[test]
fn p1_check_round_trips() {
    for (map, delta, expected) in [
        ("t^2", "0, inf", true),
        ("t^2", "0, 1, -1", false),
        ("t^2", "0, 1, -1, inf", false),
    ] {
        let out = run(&["--json", "p1-check", map, delta]);
        assert!(out.status.success());
        let report: PreimageReport = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report.contained, expected, "{map} over {{{delta}}}");
        let again: Value = serde_json::to_value(&report).unwrap();
        assert_eq!(again, serde_json::from_slice::<Value>(&out.stdout).unwrap());
    }
}

#[test]
fn obstruction_values() {
    let v = json(&[
        "obstruction",
        "--base-degree",
        "2",
        "--critical-points",
        "3",
    ]);
    assert_eq!(v["obstruction"], -1);
    assert_eq!(v["negative"], true);
    assert_eq!(
        json(&[
            "obstruction",
            "--base-degree",
            "3",
            "--critical-points",
            "2"
        ])["obstruction"],
        0
    );
}

#[test]
fn pipeline_reaches_one_of_two_branches_on_the_whole_pool() {
    let lat = PicLattice::new(4).unwrap();
    let pool = enumerate_lattice_automorphisms(&lat).unwrap();
    assert_eq!(pool.len(), 120);
    for (i, a) in pool.iter().enumerate() {
        let mut contents = String::from("5\n");
        for row in a.matrix().rows() {
            contents.push_str(&row.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
            contents.push('\n');
        }
        let path = matrix_file(&format!("auto{i}"), &contents);
        let out = run(&[
            "--json",
            "theorem-pipeline",
            "--matrix",
            path.to_str().unwrap(),
        ]);
        std::fs::remove_file(&path).ok();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report: PipelineReport = serde_json::from_slice(&out.stdout).unwrap();
        let branch = serde_json::to_value(&report.outcome).unwrap()["branch"]
            .as_str()
            .unwrap()
            .to_string();
        assert!(
            branch == "identity_branch" || branch == "obstruction_branch",
            "{branch}"
        );
        assert_eq!(
            serde_json::to_value(&report).unwrap(),
            serde_json::from_slice::<Value>(&out.stdout).unwrap()
        );
    }
}

#[test]
fn pipeline_defaults_and_scaled_identity() {
    let v = json(&["theorem-pipeline"]);
    assert_eq!(v["outcome"]["branch"], "identity_branch");
    let path = matrix_file(
        "scaled",
        "5\n2 0 0 0 0\n0 2 0 0 0\n0 0 2 0 0\n0 0 0 2 0\n0 0 0 0 2\n",
    );
    let v = json(&["theorem-pipeline", "--matrix", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(v["outcome"]["branch"], "obstruction_branch");
    assert_eq!(v["outcome"]["obstruction"], -1);
}

#[test]
fn exit_codes() {
    // Domain errors exit with 1.
    assert_eq!(run(&["lines", "--blowups", "9"]).status.code(), Some(1));
    assert_eq!(
        run(&["analyze-map", "x0 + x1, x1^2, x2"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["analyze-map", "x0, x1, 2x2"]).status.code(), Some(1));
    assert_eq!(
        run(&[
            "obstruction",
            "--base-degree",
            "0",
            "--critical-points",
            "3"
        ])
        .status
        .code(),
        Some(1)
    );
    let singular = matrix_file(
        "singular",
        "5\n0 0 0 0 0\n0 0 0 0 0\n0 0 0 0 0\n0 0 0 0 0\n0 0 0 0 0\n",
    );
    assert_eq!(
        run(&["theorem-pipeline", "--matrix", singular.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    std::fs::remove_file(&singular).ok();
    let json_err = run(&["--json", "lines", "--blowups", "9"]);
    let v: Value = serde_json::from_slice(&json_err.stdout).unwrap();
    assert!(v["error"].is_string());

    // Usage errors exit with 2.
    assert_eq!(run(&["lines"]).status.code(), Some(2));
    assert_eq!(
        run(&["lines", "--blowups", "4", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let bad = matrix_file("bad", "3\n1 2\n");
    assert_eq!(
        run(&["theorem-pipeline", "--matrix", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_file(&bad).ok();
    assert_eq!(
        run(&["theorem-pipeline", "--matrix", "/nonexistent/matrix"])
            .status
            .code(),
        Some(2)
    );

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

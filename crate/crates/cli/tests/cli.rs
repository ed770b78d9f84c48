use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use besicovitch_cli::setfile::parse_set_description;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_besicovitch");

const SQUARE: &str = r#"{"type":"cells","rects":[[0,0,1,1]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("BESICOVITCH_CELL_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "exit {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_line(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    let line = text.lines().last().expect("diagnostic line");
    serde_json::from_str(line).expect("diagnostic is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).expect("column");
    lines
        .map(|l| l.split(',').nth(k).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn ortho_projection_of_unit_square() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", SQUARE);
    let out = stdout(&run(&[
        "project",
        "--set",
        &sq,
        "--ortho",
        "--directions",
        "4",
    ]));
    assert!(out.starts_with("level,index,angle,measure\n"));
    assert!(!out.contains('\r'));
    let m = column(&out, "measure");
    assert_eq!(m.len(), 4);
    let want = [1.0, 2f64.sqrt(), 1.0, 2f64.sqrt()];
    for (got, want) in m.iter().zip(want) {
        assert!((got - want).abs() < 1e-12, "{m:?}");
    }
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", SQUARE);
    let cases: Vec<Vec<&str>> = vec![
        vec!["project", "--fitted", "5", "--directions", "90"],
        vec![
            "radial",
            "--fitted",
            "2-5",
            "--grid",
            "5,5",
            "--skip-inside",
        ],
        vec![
            "section",
            "--fitted",
            "4",
            "--vertical",
            "0.3",
            "--sloped",
            "0.2,1.7",
        ],
        vec!["assemble", "--fitted", "1-4", "--raster", "96"],
        vec![
            "assemble",
            "--fitted",
            "3",
            "--vertical",
            "-1.1",
            "--window=-2,-2,2,2",
        ],
        vec!["refine", "--set", &sq, "--eps", "0.3", "--level", "3"],
        vec!["raster", "--fitted", "3", "--size", "80,60"],
    ];
    for case in cases {
        let outs: Vec<String> = ["1", "3"]
            .iter()
            .map(|w| {
                let mut args = case.clone();
                args.extend(["--workers", w]);
                stdout(&run(&args))
            })
            .collect();
        assert_eq!(outs[0], outs[1], "{case:?}");
    }
}

#[test]
fn emitted_descriptions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    let f = first.to_string_lossy();
    let s = second.to_string_lossy();
    stdout(&run(&[
        "construct",
        "--fitted",
        "3",
        "--rect",
        "0.1,0.2,0.7,0.9",
        "--emit",
        &f,
    ]));
    stdout(&run(&["construct", "--set", &f, "--emit", &s]));
    let a = std::fs::read(&first).unwrap();
    assert_eq!(a, std::fs::read(&second).unwrap());

    let nested = r#"{"type":"union","children":[
        {"type":"clip","rect":[0,0,0.5,1],"child":{"type":"attractor","system":"four_corner","level":2}},
        {"type":"affine","matrix":[0.5,0,0,0.5],"translate":[1,1],
         "child":{"type":"cells","rects":[[0,0,1,1]],"polys":[[[0,0],[1,0],[0.2,0.9]]]}}]}"#;
    let doc = parse_set_description(nested).unwrap();
    let canon = doc.to_canonical();
    let again = parse_set_description(&canon).unwrap();
    assert_eq!(again, doc);
    assert_eq!(again.to_canonical(), canon);
}

#[test]
fn refine_full_square() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", SQUARE);
    let report = dir.path().join("report.json");
    let out = stdout(&run(&[
        "refine",
        "--set",
        &sq,
        "--eps",
        "0.3",
        "--level",
        "4",
        "--report",
        &report.to_string_lossy(),
    ]));
    let up = column(&out, "dh_upper")[0];
    assert!(up < 0.3, "{up}");
    assert!(up >= column(&out, "dh_lower")[0]);
    assert_eq!(column(&out, "x_projection")[0], 1.0);
    let r: Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(r["dh_upper"].as_f64().unwrap(), up);
    assert_eq!(
        r["squares"].as_array().unwrap().len() as f64,
        column(&out, "squares")[0]
    );
}

#[test]
fn raster_levels_write_images_and_shrink() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_string_lossy();
    let out = stdout(&run(&[
        "assemble",
        "--fitted",
        "1-6",
        "--raster",
        "256",
        "--out-dir",
        &d,
        "--svg",
    ]));
    let fracs = column(&out, "fraction");
    assert_eq!(fracs.len(), 6);
    assert!(fracs.windows(2).all(|w| w[1] <= w[0]), "{fracs:?}");
    for n in 1..=6 {
        let pgm = std::fs::read(dir.path().join(format!("assembly-level-{n}.pgm"))).unwrap();
        assert!(pgm.starts_with(b"P5\n256 256\n255\n"));
        assert_eq!(pgm.len(), "P5\n256 256\n255\n".len() + 256 * 256);
        let svg =
            std::fs::read_to_string(dir.path().join(format!("assembly-level-{n}.svg"))).unwrap();
        assert!(svg.contains("version=\"1.1\""));
    }
}

#[test]
fn reads_descriptions_from_stdin() {
    let mut child = Command::new(BIN)
        .args(["construct", "--set", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"type":"attractor","system":"four_corner","ratio":0.25,"level":3}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(column(&stdout(&out), "cells"), vec![64.0]);
}

#[test]
fn schema_errors_name_the_node() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"type":"union","children":[{"type":"cells"},{"type":"affine","matrix":[1,0,0,1],"child":{"type":"atractor"}}]}"#,
    );
    let o = run(&["construct", "--set", &bad]);
    assert_eq!(o.status.code(), Some(3));
    let e = error_line(&o);
    assert_eq!(e["error"], "schema");
    assert_eq!(e["path"], "children[1].child.type");
}

#[test]
fn syntax_errors_carry_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "{\"type\": \"cells\",\n  \"rects\": [[0, 0, 1, 1]]\n  \"polys\": []}",
    );
    let o = run(&["construct", "--set", &bad]);
    assert_eq!(o.status.code(), Some(3));
    let e = error_line(&o);
    assert_eq!(e["error"], "syntax");
    assert_eq!(e["line"], 3);
}

#[test]
fn exit_codes() {
    let usage = run(&["refine", "--fitted", "2", "--level", "2"]);
    assert_eq!(usage.status.code(), Some(2));
    assert_eq!(error_line(&usage)["error"], "usage");

    let missing = run(&["construct", "--set", "/nonexistent/set.json"]);
    assert_eq!(missing.status.code(), Some(3));

    let outside = run(&[
        "refine",
        "--fitted",
        "2",
        "--rect",
        "0,0,0.5,1",
        "--eps",
        "0.3",
        "--level",
        "2",
    ]);
    assert_eq!(outside.status.code(), Some(3));

    let budget = Command::new(BIN)
        .args(["construct", "--fitted", "6"])
        .env("BESICOVITCH_CELL_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(4));
    assert_eq!(error_line(&budget)["error"], "budget");

    let deep = run(&["construct", "--fitted", "13"]);
    assert_eq!(deep.status.code(), Some(4));

    let suite = run(&["suite", "--criterion", "3", "--criterion", "6"]);
    let text = stdout(&suite);
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 2);

    assert_eq!(run(&["suite", "--criterion", "11"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

use std::path::Path;
use std::process::{Command, Output};

use amfem::mesh::read_mesh;
use amfem::report::{read_table, read_vtk};

fn amfem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amfem")).args(args).output().unwrap()
}

fn run_into(dir: &Path, extra: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut args = vec!["--problem", "example1", "--max-ndof", "1500", "--out", out];
    args.extend_from_slice(extra);
    amfem(&args)
}

#[test]
fn writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(dir.path(), &["--emit", "csv,svg,vtk,indicators,mesh", "--theta-a", "0.5", "--kappa", "0.8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("levels.csv")).unwrap();
    let first = csv.lines().next().unwrap();
    assert!(first.starts_with("# problem=example1 theta-a=0.5 theta-b=0.5 kappa=0.8"), "{first}");
    let records = read_table(&csv).unwrap();
    assert_eq!(records[0].ndof, 168);
    assert!(records.iter().all(|r| r.ndof <= 1500 && r.seconds.is_none()));

    let svg = std::fs::read_to_string(dir.path().join("convergence.svg")).unwrap();
    assert!(svg.contains("stroke-dasharray"));

    let vtk = read_vtk(&std::fs::read_to_string(dir.path().join("solution.vtk")).unwrap()).unwrap();
    let mesh = read_mesh(&std::fs::read_to_string(dir.path().join("mesh.txt")).unwrap()).unwrap();
    assert_eq!(vtk.cells.len(), mesh.num_triangles());
    assert_eq!(mesh.num_triangles(), records.last().unwrap().triangles);

    let dumps = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("indicators_"))
        .count();
    assert_eq!(dumps, records.len());

    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("168"));
}

#[test]
fn output_is_deterministic() {
    // identical configs, including the output directory, give identical bytes
    let cfg = tempfile::tempdir().unwrap();
    let out = cfg.path().join("run");
    let args = ["--problem", "example3", "--max-ndof", "1200", "--out", out.to_str().unwrap()];
    assert!(amfem(&args).status.success());
    let first = std::fs::read(out.join("levels.csv")).unwrap();
    assert!(amfem(&args).status.success());
    assert_eq!(std::fs::read(out.join("levels.csv")).unwrap(), first);
}

#[test]
fn timing_fills_the_seconds_column() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_into(dir.path(), &["--timing", "--max-levels", "2"]).status.success());
    let records = read_table(&std::fs::read_to_string(dir.path().join("levels.csv")).unwrap()).unwrap();
    assert_eq!(records.len(), 3);
    assert!(records.iter().all(|r| r.seconds.is_some_and(|s| s >= 0.0)));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "problem = example2\nstrategy = uniform\nmax-levels = 2\n").unwrap();
    let out = dir.path().join("o");
    let o = amfem(&["--config", cfg.to_str().unwrap(), "--max-levels", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let records = read_table(&std::fs::read_to_string(out.join("levels.csv")).unwrap()).unwrap();
    assert_eq!(records.len(), 2);
    assert!(records.iter().all(|r| r.case.as_str() == "uniform"));
}

#[test]
fn problem_without_exact_solution() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    std::fs::write(&file, "name = peak\ndomain = l_shape\nh = 0.5\nb1 = 1\ngamma = 1\nf = gaussian\n").unwrap();
    let out = dir.path().join("o");
    let o = amfem(&["--problem", file.to_str().unwrap(), "--max-levels", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("levels.csv")).unwrap();
    let row = csv.lines().nth(2).unwrap();
    assert_eq!(row.split(',').nth(2), Some(""));
}

#[test]
fn rejects_bad_input() {
    let o = amfem(&["--theta-a", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("theta_a") && err.contains("(0, 1)"), "{err}");
    assert_eq!(amfem(&["--frobnicate"]).status.code(), Some(2));
    assert_eq!(amfem(&["--strategy", "sideways"]).status.code(), Some(2));
}

#[test]
fn help_and_version() {
    let o = amfem(&["--help"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("--strategy"));
    assert!(amfem(&["--version"]).status.success());
}

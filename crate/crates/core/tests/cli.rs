//! The command-line front end and the structure-file container.

mod common;

use std::path::PathBuf;

use common::same;
use gradira::cli::{run, Outcome};
use gradira::scenarios::{reduced_canonical, scenario_extension_table, yang_mills, Algebra};
use gradira::structure_file::StructureFile;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gradira-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gradira(args: &[&str]) -> Outcome {
    run(std::iter::once("gradira").chain(args.iter().copied()))
}

fn reduced_file(name: &str) -> String {
    let path = scratch(name);
    let p = path.to_str().unwrap();
    let out = gradira(&["scenario", "reduced-canonical", "--n", "2", "--fields", "1", "-o", p]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    p.to_string()
}

#[test]
fn verify_passes_on_a_written_scenario() {
    let f = reduced_file("verify.json");
    let out = gradira(&["-f", &f, "verify", "--samples", "1", "--seed", "7"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.lines().all(|l| l.starts_with("PASS")), "{}", out.stdout);
}

#[test]
fn bracket_golden() {
    let f = reduced_file("bracket.json");
    let out = gradira(&["-f", &f, "bracket", "-a", "y1*dX[1]", "-b", "p11*dX[1] + p21*dX[2]"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("PASS bracket:"), "{}", out.stdout);
}

#[test]
fn exit_codes() {
    let f = reduced_file("codes.json");
    // a form that is not Hamiltonian is an input error naming the flag
    let out = gradira(&["-f", &f, "bracket", "-a", "p11*dX[1]", "-b", "y1*dX[1]"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("-a"), "{}", out.stderr);
    // a check that runs and fails
    let out = gradira(&["-f", &f, "hamiltonian", "-H", "0*dX[]"]);
    assert_eq!(out.code, 1, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("FAIL"));
    let out = gradira(&["-f", "/nonexistent/structure.json", "verify"]);
    assert_eq!(out.code, 2);
    let out = gradira(&["-f", &f, "hdw", "-a", "y1*dX[1] +"]);
    assert_eq!(out.code, 2);
    assert_eq!(gradira(&["no-such-command"]).code, 2);
    assert_eq!(gradira(&["--help"]).code, 0);
}

#[test]
fn yang_mills_hdw_from_the_command_line() {
    let path = scratch("ym.json");
    let p = path.to_str().unwrap();
    let out = gradira(&[
        "scenario", "yang-mills", "--n", "3", "--algebra", "abelian", "--signature", "-1,1,1", "-o", p,
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = gradira(&["-f", p, "hdw"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().filter(|l| l.contains("==")).count(), 6);
}

#[test]
fn extend_writes_a_loadable_table() {
    let f = reduced_file("extend-in.json");
    let o = scratch("extend-out.json");
    let out = gradira(&["-f", &f, "extend", "-j", "2", "-o", o.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    let file = StructureFile::from_json(&std::fs::read_to_string(&o).unwrap()).unwrap();
    let loaded = file.load().unwrap();
    assert!(loaded.extension_table().unwrap().is_ok());
    let out = gradira(&["-f", o.to_str().unwrap(), "evolution"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
}

#[test]
fn structure_files_round_trip() {
    for sc in [reduced_canonical(3, 1).unwrap(), yang_mills(3, Algebra::Su2, None).unwrap()] {
        let ext = scenario_extension_table(&sc).unwrap().unwrap();
        let file = StructureFile::from_scenario(&sc, Some(&ext));
        let text = file.to_json();
        let again = StructureFile::from_json(&text).unwrap();
        assert_eq!(again, file);
        let l = again.load().unwrap();
        assert!(same(l.hamiltonian.as_ref().unwrap(), &sc.hamiltonian));
        assert!(l.structure.span(sc.structure.n()).same_as(sc.structure.span(sc.structure.n())));
        let t = l.extension_table().unwrap().unwrap();
        assert_eq!(t.entries.len(), ext.entries.len());
    }
}

#[test]
fn file_errors_name_the_field() {
    let sc = reduced_canonical(2, 1).unwrap();
    let mut file = StructureFile::from_scenario(&sc, None);
    file.sharp[0].form = "q*dX[]".into();
    let err = file.load().unwrap_err().to_string();
    assert!(err.contains("sharp[0].form"), "{err}");
    let err = StructureFile::from_json("{\"base\": [\"x1\"],\n \"bogus\": 1}").unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
}

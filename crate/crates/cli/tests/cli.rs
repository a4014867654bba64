use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn umf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umf"))
        .args(args)
        .output()
        .expect("run umf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn verify_valid_fixtures() {
    let mut names = vec!["rp2.mf".to_string(), "double_rp2.mf".to_string()];
    for n in 1..=4 {
        names.push(format!("an_q_{n}.mf"));
        names.push(format!("an_r_{n}.mf"));
    }
    for name in names {
        let o = umf(&["verify", fixture(&name).to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}");
        assert_eq!(stdout(&o), "Q² = W·Id: OK\n");
    }
    let o = umf(&["--format", "records", "verify", fixture("rp2.mf").to_str().unwrap()]);
    assert!(stdout(&o).starts_with("ok=true residual_terms=0\n"));
    assert!(stdout(&o).contains("seed="));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("rp2.mf")).unwrap();

    let perturbed = dir.path().join("perturbed.mf");
    std::fs::write(&perturbed, text.replace("y, 0, x^-1, 1", "y, 0, x^-1, x")).unwrap();
    let o = umf(&["--format", "records", "verify", perturbed.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("ok=false residual_terms="));

    let malformed = dir.path().join("malformed.mf");
    std::fs::write(&malformed, text.replace("y, 0, x^-1, 1", "y, 0, x^-1 +, 1")).unwrap();
    let o = umf(&["verify", malformed.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"));

    let missing = dir.path().join("absent.mf");
    assert_eq!(code(&umf(&["verify", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&umf(&["verify", "--no-such-flag", "x"])), 2);
    assert_eq!(code(&umf(&["suite", "--field", "2^9"])), 2);
}

#[test]
fn parse_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let messy = dir.path().join("messy.mf");
    std::fs::write(
        &messy,
        "# comment\nfield: 2^1 modulus 11\nring: x,y laurent:1,1\npotential: y^-1*x^-1 + y+x\nsize: 4\n\
         0,1,1,y^-1*x^-1\ny,0,x^-1,1\nx,y^-1,0,1\n1,x,y,0\n",
    )
    .unwrap();
    let first = umf(&["parse-check", messy.to_str().unwrap()]);
    assert_eq!(code(&first), 0);
    let canon = dir.path().join("canon.mf");
    std::fs::write(&canon, &first.stdout).unwrap();
    let second = umf(&["parse-check", canon.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, std::fs::read(fixture("rp2.mf")).unwrap());
}

#[test]
fn double_matches_fixture() {
    let o = umf(&["double", fixture("rp2.mf").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, std::fs::read(fixture("double_rp2.mf")).unwrap());
}

#[test]
fn cohomology_records() {
    let o = umf(&[
        "--format",
        "records",
        "cohomology",
        fixture("rp2.mf").to_str().unwrap(),
        "--dmax",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("h[2]=3\n") && out.contains("h[3]=3\n"));
}

#[test]
fn jacobian_report() {
    let o = umf(&["jacobian", "--potential", "x + y + x^-1*y^-1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("dimension 3, minimal polynomial of x: x^3+1\n"));
}

#[test]
fn reduce_and_evaluate() {
    let o = umf(&["--format", "records", "reduce"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("alpha=x^2\nwitness_verified=true\n"));
    let not_closed = umf(&["reduce", "--matrix", "x,0,0,0;0,0,0,0;0,0,0,0;0,0,0,0"]);
    assert_eq!(code(&not_closed), 1);

    let o = umf(&["evaluate", fixture("rp2.mf").to_str().unwrap(), "--field", "2^2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = umf(&[
        "--format",
        "records",
        "evaluate",
        fixture("rp2.mf").to_str().unwrap(),
        "--field",
        "2^2",
        "--point",
        "{2},{3}",
    ]);
    assert!(stdout(&o).contains("critical=false local_dim=0 id_nonexact=false"));
}

#[test]
fn search_reports() {
    let o = umf(&[
        "--format",
        "records",
        "search",
        "--potential",
        "x^2 + y^2",
        "--support",
        "x;y",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("found=1\nresult[0]=x+y\n"));
    let o = umf(&["search", "--potential", "x^2 + y^2", "--support", "x;y", "--size", "4"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn suite_passes_with_seed() {
    let o = umf(&[
        "--format",
        "records",
        "--seed",
        "7",
        "suite",
        "--samples",
        "10",
        "--dmax",
        "4",
    ]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0, "{out}");
    assert!(out.contains("failed=0\n") && out.ends_with("seed=7\n"));
    let text = umf(&["--seed", "7", "suite", "--samples", "10", "--dmax", "4"]);
    assert!(stdout(&text).trim_end().ends_with("seed=7"));
}

//! CLI contract: exit codes 0/1/2/3 on a fixture set, and the
//! factor → verify pipeline exiting 0 on generated instances.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_atomfact"))
}

fn write(path: &Path, contents: &str) {
    fs::write(path, contents).expect("write fixture");
}

#[test]
fn criterion_7_cli_contract() {
    let dir = tempfile::tempdir().expect("tempdir");

    // Singular matrix → exit 2.
    let singular = dir.path().join("singular.json");
    write(
        &singular,
        r#"{"ring":"Q[x]","rows":2,"cols":2,"entries":[[["0","1"],["0","1"]],[["0","1"],["0","1"]]]}"#,
    );
    let st = bin()
        .args(["factor", "--input"])
        .arg(&singular)
        .status()
        .expect("run");
    assert_eq!(st.code(), Some(2), "singular input must exit 2");

    // Unit matrix → exit 3.
    let unit = dir.path().join("unit.json");
    write(
        &unit,
        r#"{"ring":"Q[x]","rows":2,"cols":2,"entries":[[["1"],["0","1"]],[["0"],["1"]]]}"#,
    );
    let st = bin()
        .args(["factor", "--input"])
        .arg(&unit)
        .status()
        .expect("run");
    assert_eq!(st.code(), Some(3), "unit input must exit 3");

    // Malformed document → exit 1.
    let malformed = dir.path().join("malformed.json");
    write(&malformed, r#"{"ring":"Q[x]","rows":2}"#);
    let st = bin()
        .args(["factor", "--input"])
        .arg(&malformed)
        .status()
        .expect("run");
    assert_eq!(st.code(), Some(1), "malformed input must exit 1");

    // Dimension mismatch → exit 1.
    let mismatched = dir.path().join("mismatched.json");
    write(
        &mismatched,
        r#"{"ring":"Q[x]","rows":2,"cols":2,"entries":[[["1"]]]}"#,
    );
    let st = bin()
        .args(["factor", "--input"])
        .arg(&mismatched)
        .status()
        .expect("run");
    assert_eq!(st.code(), Some(1), "dimension mismatch must exit 1");

    // gen → factor → verify exits 0, and gen is byte-identical per seed.
    for seed in 0..10u64 {
        let m_path = dir.path().join(format!("m{seed}.json"));
        let st = bin()
            .args(["gen", "--seed", &seed.to_string(), "--output"])
            .arg(&m_path)
            .status()
            .expect("run");
        assert_eq!(st.code(), Some(0), "gen must exit 0");

        let again = dir.path().join(format!("m{seed}.again.json"));
        let st = bin()
            .args(["gen", "--seed", &seed.to_string(), "--output"])
            .arg(&again)
            .status()
            .expect("run");
        assert_eq!(st.code(), Some(0));
        assert_eq!(
            fs::read(&m_path).unwrap(),
            fs::read(&again).unwrap(),
            "gen output must be byte-identical for a fixed seed"
        );

        let f_path = dir.path().join(format!("f{seed}.json"));
        let st = bin()
            .args(["factor", "--input"])
            .arg(&m_path)
            .arg("--output")
            .arg(&f_path)
            .status()
            .expect("run");
        assert_eq!(st.code(), Some(0), "factor must exit 0 on seed {seed}");

        let st = bin()
            .args(["verify", "--input"])
            .arg(&f_path)
            .arg("--output")
            .arg(dir.path().join(format!("v{seed}.json")))
            .status()
            .expect("run");
        assert_eq!(st.code(), Some(0), "verify must exit 0 on seed {seed}");
    }

    println!("criterion 7: PASS");
}

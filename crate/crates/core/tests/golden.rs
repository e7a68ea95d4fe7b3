use std::path::Path;
use std::process::Command;

const FILES: [&str; 8] = [
    "coproduct_example.txt",
    "partition_example.txt",
    "beta_first_order.txt",
    "beta_more.txt",
    "forest_coproducts.txt",
    "cm_generators.txt",
    "tp_beta.txt",
    "dse_plane_trees.txt",
];

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn tables_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_posethopf"))
        .args(["tables", "--out"])
        .arg(dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    for name in FILES {
        let fresh = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert_eq!(fresh, golden(name), "{name}");
    }
}

#[test]
fn golden_key_lines() {
    let f = golden("forest_coproducts.txt");
    assert!(f.contains("D~(a2) = (2*t0 + t1) a1 (x) a1\n"));
    assert!(f.contains("(7*t0*t1 + 3*t1^2) a2 a1 (x) a1"));
    assert!(f.contains("(8*t0*t1 + 7*t1^2) a1 a1 (x) a2"));
    let more = golden("beta_more.txt");
    assert!(more.contains("\t2*t0*t1 + t1^2\n"));
    assert!(more.contains("\t-2*t0^2*t1 + t0*t1^2 + t1^3\n"));
    let tp = golden("tp_beta.txt");
    assert!(tp.contains("q^4 + q^3 + 2*q^2 + q + 1"));
}

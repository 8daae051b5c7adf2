use std::fs;

use edmoc::io::*;
use edmoc::{load_dissimilarities, load_instance, CliError};
use edmoc_core::problem_gen::generate_snl;
use edmoc_core::{OrdinalChain, PointCloud, SnlConfig, SymmetricMatrix};

#[test]
fn generated_instance_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate_snl(&SnlConfig::new(25, 0.7, 0.1, 3)).unwrap();
    let files = write_instance(dir.path(), "inst", &inst).unwrap();
    assert_eq!(files.len(), 3);
    assert_eq!(load_dissimilarities(&files[0]).unwrap(), inst);
}

#[test]
fn chain_from_truth_without_chain_file() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate_snl(&SnlConfig::new(12, 2.0, 0.2, 4)).unwrap();
    let files = write_instance(dir.path(), "inst", &inst).unwrap();
    fs::remove_file(&files[2]).unwrap();
    assert_eq!(load_dissimilarities(&files[0]).unwrap().chain(), inst.chain());
}

#[test]
fn handwritten_three_point_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("tri.csv");
    fs::write(&p, "n=3\n0,1,2\n1,0,1.5\n2,1.5,0\n").unwrap();
    let inst = load_dissimilarities(&p).unwrap();
    assert_eq!(inst.n(), 3);
    assert_eq!(inst.chain().len(), 3);
    assert_eq!(inst.chain().to_one_based(), [(1, 3), (2, 3), (1, 2)]);
    assert_eq!(inst.rank(), 2);
    assert!(inst.truth().is_none());
}

#[test]
fn negative_dissimilarity_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("neg.csv");
    fs::write(&p, "n=3\n0,-1,2\n-1,0,1\n2,1,0\n").unwrap();
    assert!(matches!(load_dissimilarities(&p), Err(CliError::Data(_))));
}

#[test]
fn asymmetry_is_rejected_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("asym.csv");
    fs::write(&p, "n=3\n0,1,2\n1.001,0,1\n2,1,0\n").unwrap();
    match load_dissimilarities(&p) {
        Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
    fs::write(&p, "n=3\n0,1,2\n1.0000000000001,0,1\n2,1,0\n").unwrap();
    assert!(load_dissimilarities(&p).is_ok());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let p = std::path::Path::new("m.csv");
    let cases = [
        ("n=2\n0,1\n1,x\n", 3),
        ("size 2\n0,1\n1,0\n", 1),
        ("n=2\n0,1\n1,0,3\n", 3),
        ("n=3\n0,1,1\n1,0,1\n", 3),
        ("n=2\n\n0,1\n1,0\n0,0\n", 5),
    ];
    for (text, line) in cases {
        match parse_matrix(p, text) {
            Err(CliError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: unexpected {other:?}"),
        }
    }
}

#[test]
fn nonzero_diagonal_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("diag.csv");
    fs::write(&p, "n=2\n0.5,1\n1,0\n").unwrap();
    assert!(matches!(load_dissimilarities(&p), Err(CliError::Data(_))));
}

#[test]
fn matrix_and_points_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let m = SymmetricMatrix::from_fn(4, |i, j| if i == j { 0.0 } else { 1.0 / (1 + i + j) as f64 + 1e-13 }).unwrap();
    let p = dir.path().join("m.csv");
    write_matrix(&p, &m).unwrap();
    assert_eq!(read_matrix(&p).unwrap(), m);
    let x = PointCloud::from_points(2, &[vec![0.1, -0.2], vec![1.0 / 3.0, 2.5e-9], vec![7.0, 8.0]]).unwrap();
    let q = dir.path().join("x.csv");
    write_points(&q, &x).unwrap();
    assert_eq!(fs::read_to_string(&q).unwrap().lines().count(), 2);
    assert_eq!(read_points(&q).unwrap(), x);
}

#[test]
fn chain_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let c = OrdinalChain::from_one_based(4, &[(2, 3), (1, 2), (1, 3), (1, 4), (3, 4), (2, 4)]).unwrap();
    let p = dir.path().join("c.json");
    write_chain(&p, &c).unwrap();
    assert_eq!(fs::read_to_string(&p).unwrap().trim(), "[[2,3],[1,2],[1,3],[1,4],[3,4],[2,4]]");
    assert_eq!(read_chain(&p).unwrap(), c);
    fs::write(&p, "[[1,2],[1,2],[2,3]]").unwrap();
    assert!(read_chain(&p).is_err());
}

#[test]
fn explicit_chain_and_rank_override() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate_snl(&SnlConfig::new(6, 2.0, 0.0, 1)).unwrap();
    let files = write_instance(dir.path(), "inst", &inst).unwrap();
    let c = OrdinalChain::canonical(6).unwrap();
    let cp = dir.path().join("canon.json");
    write_chain(&cp, &c).unwrap();
    let loaded = load_instance(&files[0], Some(3), Some(&cp)).unwrap();
    assert_eq!(loaded.chain(), &c);
    assert_eq!(loaded.rank(), 3);
    assert!(matches!(load_instance(&files[0], Some(6), None), Err(CliError::Usage(_))));
}

use std::fs;

use linfeas::problems::{
    gen_random, load_lp, load_problem, lp_to_feasibility, read_matrix, read_matrix_market, read_vector, save_problem,
    write_matrix_market, write_vector, GenSpec,
};
use linfeas::{CsrMatrix, DenseMatrix, Error, Matrix};

#[test]
fn problem_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_random(&GenSpec::gaussian(25, 7, 0.4, 12)).unwrap();
    let manifest = save_problem(&g.problem, dir.path(), "p", "gaussian", Some(&g.witness)).unwrap();
    let loaded = load_problem(&manifest).unwrap();
    assert_eq!(loaded.problem.rhs(), g.problem.rhs());
    assert_eq!(loaded.witness.as_deref(), Some(&g.witness[..]));
    let x = vec![0.3; 7];
    for i in 0..25 {
        assert_eq!(loaded.problem.row_residual(i, &x), g.problem.row_residual(i, &x));
    }
}

#[test]
fn sparse_matrix_market_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.mtx");
    let a: Matrix = CsrMatrix::from_triplets(3, 5, &[(0, 4, 1.5), (2, 0, -2.0), (1, 1, 1e-17)]).unwrap().into();
    write_matrix_market(&a, &path).unwrap();
    let b = read_matrix_market(&path).unwrap();
    assert_eq!(a.to_dense(), b.to_dense());
}

#[test]
fn symmetric_and_pattern_headers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sym.mtx");
    fs::write(
        &path,
        "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 2\n1 1 4.0\n3 1 -1.0\n",
    )
    .unwrap();
    let d = read_matrix_market(&path).unwrap().to_dense();
    assert_eq!(d.row(0), &[4.0, 0.0, -1.0]);
    assert_eq!(d.row(2), &[-1.0, 0.0, 0.0]);

    fs::write(&path, "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n2 1\n").unwrap();
    assert_eq!(read_matrix_market(&path).unwrap().to_dense().row(1), &[1.0, 0.0]);
}

#[test]
fn parse_errors_carry_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mtx");
    fs::write(&path, "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 3.0\n").unwrap();
    match read_matrix_market(&path).unwrap_err() {
        Error::Parse { line, .. } => assert_eq!(line, 3),
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn csv_matrices_and_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    fs::write(&path, "1,2\n3,4\n5,6\n").unwrap();
    let a = read_matrix(&path).unwrap();
    assert_eq!(a.to_dense(), DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap());
    let v = vec![0.1, -3.0, 1e-300];
    let vp = dir.path().join("v.txt");
    write_vector(&v, &vp).unwrap();
    assert_eq!(read_vector(&vp).unwrap(), v);
}

#[test]
fn lp_manifest_with_missing_bounds() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.csv"), "1,1,1\n").unwrap();
    write_vector(&[4.0], &dir.path().join("b.txt")).unwrap();
    write_vector(&[-1.0, -2.0, 0.0], &dir.path().join("c.txt")).unwrap();
    write_vector(&[0.0; 3], &dir.path().join("l.txt")).unwrap();
    let manifest = serde_json::json!({
        "name": "tiny",
        "a_eq_path": "a.csv",
        "b_eq_path": "b.txt",
        "c_path": "c.txt",
        "lower_path": "l.txt",
        "p_star": -8.0
    });
    let path = dir.path().join("lp.json");
    fs::write(&path, manifest.to_string()).unwrap();
    let lp = load_lp(&path).unwrap();
    assert!(lp.upper.iter().all(|u| u.is_infinite()));
    let (p, layout) = lp_to_feasibility(&lp).unwrap();
    assert_eq!((layout.equality_rows, layout.upper_rows, layout.lower_rows), (1, 0, 3));
    assert_eq!(p.m(), 2 + 3 + 1);
    assert!(p.max_violation(&[0.0, 4.0, 0.0]) <= 1e-12);
}

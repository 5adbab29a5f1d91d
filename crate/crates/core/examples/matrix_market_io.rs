//! Save a generated problem as Matrix Market plus a JSON manifest, load it
//! back and check the round trip.
//!
//! ```bash
//! cargo run --example matrix_market_io
//! ```

use linfeas::problems::{gen_random, load_problem, read_matrix_market, save_problem, write_matrix_market, GenSpec};
use linfeas::CsrMatrix;

fn main() -> linfeas::Result<()> {
    let dir = std::env::temp_dir().join("linfeas-mm-example");
    let g = gen_random(&GenSpec::correlated(30, 5, 0.3, 9))?;
    let manifest = save_problem(&g.problem, &dir, "corr30x5", "correlated", Some(&g.witness))?;
    println!("{}", std::fs::read_to_string(&manifest)?);

    let loaded = load_problem(&manifest)?;
    let same = loaded.problem.rhs() == g.problem.rhs()
        && (0..30).all(|i| loaded.problem.row_norms_sq()[i] == g.problem.row_norms_sq()[i]);
    println!("round trip exact: {same}; witness stored: {}", loaded.witness.is_some());

    let sparse = CsrMatrix::from_triplets(4, 4, &[(0, 0, 2.0), (1, 3, -1.5), (3, 2, 0.25)])?;
    let path = dir.join("sparse.mtx");
    write_matrix_market(&sparse.into(), &path)?;
    print!("{}", std::fs::read_to_string(&path)?);
    let back = read_matrix_market(&path)?;
    println!("read back: {} x {}, {} stored entries", back.rows(), back.cols(), back.nnz());
    Ok(())
}

//! Problem generators, real-data transforms and file formats.

mod generate;
mod io;
mod transforms;

pub use generate::{gen_random, GenKind, GenSpec, Generated};
pub use io::{
    load_lp, load_problem, read_csv_matrix, read_matrix, read_matrix_market, read_vector, save_problem,
    write_matrix_market, write_vector, LoadedProblem, LpManifest, ProblemManifest,
};
pub use transforms::{box_problem, lp_to_feasibility, svm_to_feasibility, LpInstance, LpLayout};

// Matrix, label and permutation files: formats, exact round trips and the
// located errors malformed input produces.
//
//     cargo run --example file_formats

use std::path::Path;

use matchkit::io::{format_matrix_csv, format_permutation_csv, parse_matrix_csv, parse_permutation_csv};
use matchkit::linalg::DenseMatrix;
use matchkit::Permutation;

pub fn run_example() -> matchkit::Result<usize> {
    let m = DenseMatrix::from_rows(&[[0.1, -2.5e-300], [1.0 / 3.0, 7.0]])?;
    let text = format_matrix_csv(&m);
    print!("{text}");
    assert_eq!(parse_matrix_csv(&text, Path::new("inline"))?, m);

    let pi = Permutation::new(vec![2, 0, 1])?;
    print!("{}", format_permutation_csv(&pi));

    let mut rejected = 0;
    for bad in ["1,2\n3\n", "1,2\nNaN,4\n", "1,2\n\n3,4\n"] {
        if let Err(e) = parse_matrix_csv(bad, Path::new("bad.csv")) {
            println!("rejected: {e}");
            rejected += 1;
        }
    }
    if let Err(e) = parse_permutation_csv("0,1\n0,0\n", Path::new("bad_perm.csv")) {
        println!("rejected: {e}");
        rejected += 1;
    }
    Ok(rejected)
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}

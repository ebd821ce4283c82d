// Exact linear assignment on a small cost matrix, checked against the
// exhaustive oracle, plus the vector and matrix views of a permutation.
//
//     cargo run --example linear_assignment

use matchkit::{brute_force_solve, solve, CostMatrix, Permutation, SeededRng};
use matchkit::linalg::DenseMatrix;

pub fn run_example() -> matchkit::Result<(f64, f64)> {
    let fixed = CostMatrix::from_rows(&[[5.0, 1.0], [1.0, 5.0]])?;
    println!("[[5,1],[1,5]] -> {:?}", solve(&fixed)?.as_slice());

    let mut rng = SeededRng::new(3);
    let cost = CostMatrix::new(DenseMatrix::from_fn(7, 7, |_, _| (rng.uniform() * 20.0).round()))?;
    let pi = solve(&cost)?;
    let oracle = brute_force_solve(&cost)?;
    let (ours, best) = (cost.objective(&pi), cost.objective(&oracle));
    println!("7x7 integer costs: solver {ours} via {:?}", pi.as_slice());
    println!("                   oracle {best} via {:?}", oracle.as_slice());

    let matrix = pi.to_matrix();
    assert_eq!(Permutation::from_matrix(&matrix)?, pi);
    println!("inverse {:?}", pi.inverse().as_slice());
    Ok((ours, best))
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}

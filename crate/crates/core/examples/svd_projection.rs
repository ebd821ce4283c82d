// Truncated SVD of a noisy low-rank matrix, the projection LAPS uses, and the
// distance between the estimated and true right singular subspaces.
//
//     cargo run --example svd_projection

use matchkit::linalg::{frobenius_inner, project, subspace_distance, truncated_svd};
use matchkit::{make_signal_sweep_params, sample_pair, SeededRng};

pub fn run_example() -> matchkit::Result<f64> {
    let mut rng = SeededRng::new(1);
    let params = make_signal_sweep_params(&mut rng, 300, 40, 3, 200.0, 1.0, 1.0)?;
    let data = sample_pair(&mut rng, &params)?;

    let svd = truncated_svd(&data.x, 3)?;
    println!("top singular values of X: {:.2?}", svd.singular_values);
    println!("true signal strengths:    {:.2?}", params.d);

    let distance = subspace_distance(&svd.right, &params.v)?;
    println!("‖V̂V̂ᵀ − VVᵀ‖_F = {distance:.4}");

    let px = project(&data.x, &svd.right)?;
    let py = project(&data.y, &svd.right)?;
    println!("projected to {}x{}; ⟨XV̂, YV̂⟩ = {:.3}", px.rows(), px.cols(), frobenius_inner(&px, &py)?);
    Ok(distance)
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}

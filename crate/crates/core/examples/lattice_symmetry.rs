// The integer-lattice configuration and its symmetry diagnostics: per-row
// energies E_{i,k} and the weak and strong symmetry flags for k = 1..6.
//
//     cargo run --example lattice_symmetry

use matchkit::theory::symmetry_diagnostics;
use matchkit::{make_lattice_params, separation_profile};

pub fn run_example() -> matchkit::Result<bool> {
    let lattice = make_lattice_params(60, 2, 3.0, 1.0, 1.0)?;
    let profile = separation_profile(&lattice.u, &lattice.d, 1.0)?;
    println!("n=60 r=2 β=3: min separation β² = {:.4}", profile.beta_sq);

    let levels = symmetry_diagnostics(&profile, 6)?;
    for level in &levels {
        let max = level.energies.iter().copied().fold(0.0, f64::max);
        let mean = level.energies.iter().sum::<f64>() / level.energies.len() as f64;
        println!(
            "k={} C_k={:.4} max E={:.3e} mean E={:.3e} weak(sep)={} weak(energy)={} strong={:?}",
            level.k, level.c_k, max, mean, level.weak_by_separation, level.weak_by_energy, level.strong
        );
    }
    Ok(levels.iter().all(|l| l.weak_by_separation))
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}

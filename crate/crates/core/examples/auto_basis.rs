// Choosing which dataset supplies the projection basis from the residual
// spectrum when the noise levels are unknown.
//
//     cargo run --example auto_basis

use matchkit::matching::residual_noise_variance;
use matchkit::{detect_less_noisy, laps_match, make_signal_sweep_params, sample_pair, BasisSource, SeededRng};

pub fn run_example() -> matchkit::Result<BasisSource> {
    let mut rng = SeededRng::new(5);
    let params = make_signal_sweep_params(&mut rng, 300, 40, 4, 150.0, 1.5, 1.0)?;
    let data = sample_pair(&mut rng, &params)?;

    let sx = residual_noise_variance(&data.x, 4)?.sqrt();
    let sy = residual_noise_variance(&data.y, 4)?.sqrt();
    println!("estimated noise: x {sx:.3} (true 1.5), y {sy:.3} (true 1.0)");

    let pick = detect_less_noisy(&data.x, &data.y, 4)?;
    let out = laps_match(&data.x, &data.y, 4, BasisSource::Auto)?;
    println!("detected {pick}, laps used {}", out.source);
    Ok(out.source)
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}

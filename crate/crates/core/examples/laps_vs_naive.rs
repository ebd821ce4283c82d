// One draw from the model, matched by LAPS and by naive assignment on the raw
// rows, with the mismatch proportion and the cycle structure of the errors.
//
//     cargo run --example laps_vs_naive

use matchkit::{
    cycle_decompose, laps_match, make_signal_sweep_params, mismatch_loss, naive_match, sample_pair, BasisSource,
    SeededRng,
};

pub fn run_example() -> matchkit::Result<(f64, f64)> {
    let mut rng = SeededRng::new(42);
    let params = make_signal_sweep_params(&mut rng, 400, 120, 5, 220.0, 1.0, 1.0)?;
    let data = sample_pair(&mut rng, &params)?;

    let laps = laps_match(&data.x, &data.y, 5, BasisSource::FromX)?;
    let naive = naive_match(&data.x, &data.y)?;
    let laps_loss = mismatch_loss(&laps.permutation, &params.pi_star)?;
    let naive_loss = mismatch_loss(&naive, &params.pi_star)?;

    println!("n=400 p=120 r=5, d = {:.1?}", params.d);
    println!("laps  loss {laps_loss:.4}  cycles [{}]", cycle_decompose(&laps.permutation, &params.pi_star)?);
    println!("naive loss {naive_loss:.4}  cycles [{}]", cycle_decompose(&naive, &params.pi_star)?);
    Ok((laps_loss, naive_loss))
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}

// Closed-form rates for one configuration: the lower bound, the sharp and
// C6 exponential rates, the polynomial rate and the subspace error terms.
//
//     cargo run --example theory_rates

use matchkit::theory::{rate_bundle, RateBundle};
use matchkit::{ck_constant, make_signal_sweep_params, SeededRng};

pub fn run_example() -> matchkit::Result<Vec<RateBundle>> {
    let ks: Vec<String> = (1..=6).map(|k| format!("C{k}={:.4}", ck_constant(k).unwrap())).collect();
    println!("{}", ks.join(" "));

    let mut bundles = Vec::new();
    println!("{:>6}  {}", "signal", RateBundle::CSV_HEADER);
    for signal in [250.0, 375.0, 500.0] {
        let mut rng = SeededRng::new(11);
        let params = make_signal_sweep_params(&mut rng, 500, 50, 10, signal, 1.0, 1.0)?;
        let bundle = rate_bundle(&params.u, &params.d, 50, 1.0, 1.0)?;
        println!("{signal:>6}  {}", bundle.csv_row());
        bundles.push(bundle);
    }
    Ok(bundles)
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}

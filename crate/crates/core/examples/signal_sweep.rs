// A scaled-down signal sweep: LAPS and naive mean losses with the minimax
// rate overlay, written as the harness CSV.
//
//     cargo run --release --example signal_sweep

use matchkit::{run_sweep, SweepResult, SweepSpec};

pub fn run_example() -> matchkit::Result<SweepResult> {
    let spec = SweepSpec {
        n: 200,
        p: 30,
        r: 5,
        values: vec![60.0, 90.0, 120.0, 150.0],
        timing: false,
        ..SweepSpec::signal_sweep(10, 1, 2)
    };
    let result = run_sweep(&spec)?;
    print!("{}", result.to_csv());
    Ok(result)
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}

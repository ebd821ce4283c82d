// Growing the ambient dimension with U·D held fixed: the theory column stays
// put while naive matching degrades faster than LAPS.
//
//     cargo run --release --example p_sweep

use matchkit::{run_sweep, Axis, SweepResult, SweepSpec};

pub fn run_example() -> matchkit::Result<SweepResult> {
    let spec = SweepSpec {
        n: 200,
        r: 5,
        signal: 70.0,
        axis: Axis::AmbientP,
        values: vec![10.0, 40.0, 160.0],
        timing: false,
        ..SweepSpec::signal_sweep(8, 3, 4)
    };
    let result = run_sweep(&spec)?;
    print!("{}", result.to_csv());
    Ok(result)
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}

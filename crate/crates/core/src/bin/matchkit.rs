use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(matchkit::cli::run_with_args(std::env::args_os()) as u8)
}

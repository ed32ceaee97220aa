use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(weylmax_cli::dispatch(std::env::args_os()))
}

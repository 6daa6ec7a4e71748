use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(hopflab_cli::run(std::env::args_os()))
}

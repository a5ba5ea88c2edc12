use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(realtoric::cli::main_with_args(std::env::args_os()))
}

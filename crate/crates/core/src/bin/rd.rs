use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(rankdual::cli::main_with(std::env::args_os()))
}

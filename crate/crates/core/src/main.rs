use std::process::ExitCode;

fn main() -> ExitCode {
    hyperball::cli::main_with_args(std::env::args_os())
}

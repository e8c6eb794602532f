use std::process::ExitCode;

fn main() -> ExitCode {
    puredeath::cli::main()
}

use std::process::ExitCode;

fn main() -> ExitCode {
    qgwalk::cli::main()
}

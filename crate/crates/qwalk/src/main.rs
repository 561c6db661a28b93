use std::process::ExitCode;

fn main() -> ExitCode {
    qwalk::cli::run()
}

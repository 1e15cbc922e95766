use std::io::Write;
use std::process::ExitCode;

use dualconf::cli::{run, Env};

fn main() -> ExitCode {
    let out = run(std::env::args_os(), &Env::from_process());
    // A closed pipe downstream is not worth a panic.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}

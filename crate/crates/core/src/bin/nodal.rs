use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = nodal::cli::run(std::env::args_os());
    let _ = if code == 0 {
        writeln!(std::io::stdout(), "{out}")
    } else {
        writeln!(std::io::stderr(), "{out}")
    };
    ExitCode::from(code as u8)
}

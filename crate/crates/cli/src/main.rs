use std::io::Write;

fn main() {
    let (code, stdout, stderr) = spectral_twins_cli::run_args(std::env::args_os());
    let _ = std::io::stdout().write_all(stdout.as_bytes());
    let _ = std::io::stderr().write_all(stderr.as_bytes());
    std::process::exit(code);
}

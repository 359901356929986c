use std::io::Write;

fn main() {
    let env = std::env::var(ratiocert_cli::MAX_BITS_ENV).ok();
    let outcome = ratiocert_cli::run(std::env::args_os(), env.as_deref());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}

use std::io::Write;

fn main() {
    let (outcome, err) = widthlab::cli::main_with_args(std::env::args_os());
    if !outcome.stdout.is_empty() {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(outcome.stdout.as_bytes());
    }
    if let Some(msg) = err {
        eprintln!("{}", msg.trim_end());
    }
    std::process::exit(outcome.code);
}

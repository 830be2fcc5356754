//! Drives the command-line front end in-process.
//!
//!     cargo run --example cli_reports -- axiom fubini_study:4 --json

use hermitian_lab::cli::run_from;

fn main() {
    let mut args: Vec<String> = std::env::args().collect();
    if args.len() == 1 {
        args.extend(["axiom", "sphere:1", "--theta", "0.6", "--samples", "200"].map(String::from));
    }
    let outcome = run_from(args);
    print!("{}{}", outcome.stdout, outcome.stderr);
    println!("exit code {}", outcome.code);
}

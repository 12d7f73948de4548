use std::process::ExitCode;

use amfem::report::config::{resolve, Cli};
use amfem::report::run;
use clap::Parser;

fn main() -> ExitCode {
    // clap exits on its own for --help, --version and usage errors
    let cli = Cli::parse();
    let config = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(records) => {
            println!("# {}", config.describe());
            println!("{:>5} {:>8} {:>12} {:>12} {:>12} {:>12} {:>10}", "level", "ndof", "err_u", "err_p", "eta", "mu", "case");
            let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4e}"));
            for r in &records {
                println!(
                    "{:>5} {:>8} {:>12} {:>12} {:>12.4e} {:>12.4e} {:>10}",
                    r.level,
                    r.ndof,
                    cell(r.err_u),
                    cell(r.err_p),
                    r.eta,
                    r.mu,
                    r.case.as_str()
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

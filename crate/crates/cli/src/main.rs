use clap::Parser;
use modkernel_cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = execute(&cli) {
        eprintln!("modkernel: {err}");
        if let Some(remedy) = err.remedy() {
            eprintln!("modkernel: {remedy}");
        }
        std::process::exit(err.exit_code());
    }
}

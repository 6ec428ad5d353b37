use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = catrw::cli::Cli::parse();
    ExitCode::from(catrw::cli::main_with(&cli))
}

use std::process::ExitCode;

use clap::Parser;

use wiretap_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match wiretap_cli::run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("wiretap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

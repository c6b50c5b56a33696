use clap::Parser;
use dehn_bounds::cli::{self, Cli, CliError};

fn main() {
    let cli = Cli::parse();
    match cli::execute(cli) {
        Ok(text) => print!("{text}"),
        Err(CliError::ChecksFailed(table)) => {
            print!("{table}");
            std::process::exit(1);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

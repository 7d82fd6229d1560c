use std::process::ExitCode;

use clap::Parser;
use manybody_cli::{run, Args};

fn main() -> ExitCode {
    let command = std::env::args().collect::<Vec<_>>().join(" ");
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = manybody_cli::CliError::config(None, e.to_string().trim_end());
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run(&args, command) {
        Ok(m) => {
            for f in &m.outputs {
                println!("{}", args.out.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::process::ExitCode;

use pil_cli::CliError;

fn main() -> ExitCode {
    pil_cli::init_logging();
    let config = match pil_cli::parse_config(std::env::args_os()) {
        Ok(c) => c,
        Err(CliError::Help(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    ExitCode::from(pil_cli::execute(&config) as u8)
}

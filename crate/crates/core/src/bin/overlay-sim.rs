use std::process::ExitCode;

use clap::error::ErrorKind;
use overlay_sim::cli;

fn main() -> ExitCode {
    let inv = match cli::parse_config(std::env::args_os()) {
        Ok(inv) => inv,
        Err(err) => {
            if let Some(clap_err) = err.downcast_ref::<clap::Error>() {
                if matches!(
                    clap_err.kind(),
                    ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
                ) {
                    let _ = clap_err.print();
                    return ExitCode::SUCCESS;
                }
                let text = clap_err.to_string();
                let first = text.lines().next().unwrap_or("invalid arguments");
                eprintln!("overlay-sim: {}", first.trim_start_matches("error: "));
                return ExitCode::from(2);
            }
            eprintln!("overlay-sim: {err:#}");
            return ExitCode::from(2);
        }
    };
    match cli::run(&inv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("overlay-sim: {err:#}");
            ExitCode::FAILURE
        }
    }
}

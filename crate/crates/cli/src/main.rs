use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use log::{error, info};
use misolab::error::SUITE_VIOLATION;
use misolab::{execute, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            error!("{e}");
            eprintln!("misolab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    print!("{report}");
    if let Some(path) = cli.command.output() {
        let json = report.to_json();
        if path.as_os_str() == "-" {
            print!("{json}");
        } else if let Err(e) = std::fs::write(path, json) {
            eprintln!("misolab: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        } else {
            info!("report written to {}", path.display());
        }
    }
    let _ = std::io::stdout().flush();
    if report.violations() > 0 {
        return ExitCode::from(SUITE_VIOLATION as u8);
    }
    ExitCode::SUCCESS
}

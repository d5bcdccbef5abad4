use std::process::ExitCode;

use bethkit_cli::{emit, run, Cli};
use clap::error::ErrorKind;
use clap::Parser;

const USAGE_ERROR: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_ERROR),
            };
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {}", e);
            return ExitCode::from(USAGE_ERROR);
        }
    }
    let result = run(&cli).and_then(|report| Ok((emit(&cli, &report)?, report.exit_code())));
    match result {
        Ok((out, code)) => {
            print!("{}", out);
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(USAGE_ERROR)
        }
    }
}

use std::process::ExitCode;

use clap::Parser;
use morpho::cli::{run, Cli};
use morpho::parallel::threads_from_env;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = threads_from_env().and_then(|threads| run(cli, threads));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

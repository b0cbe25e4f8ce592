use std::process::ExitCode;

use clap::Parser;
use curvn::cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    if let Some(threads) = std::env::var("CURVN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if threads > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .ok();
        }
    }
    let cli = Cli::parse();
    let result = cli.into_job().and_then(|job| run(&job));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

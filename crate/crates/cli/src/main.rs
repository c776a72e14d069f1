use std::process::ExitCode;

use clap::Parser;

use chronolens_cli::cli::Cli;
use chronolens_cli::experiments::dispatch;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("CHRONOLENS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match dispatch(&cli) {
        Ok(verdict) => {
            println!("{}", serde_json::to_string(&verdict).expect("verdict serializes").trim_matches('"'));
            ExitCode::from(verdict.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("chronolens: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

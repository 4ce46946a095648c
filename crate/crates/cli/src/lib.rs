//! Command-line front end for `tunnel-chrono`.

pub mod args;
pub mod commands;
pub mod error;
pub mod quantity;
pub mod table;

pub use args::{parse_args, Command, Parsed, RunConfig};
pub use error::CliError;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "TUNNEL_CHRONO_THREADS";

fn pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize = value.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Validation(format!("{THREADS_ENV}={value} is not a positive integer"))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Validation(e.to_string()))
}

/// Runs a parsed configuration, printing the summary line on success and
/// the error otherwise. Returns the process exit status.
pub fn run(config: &RunConfig) -> i32 {
    let result = pool().and_then(|pool| pool.install(|| commands::execute(config)));
    match result {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses and runs `argv` (without the program name).
pub fn main_with_args<S: AsRef<str>>(argv: &[S]) -> i32 {
    match parse_args(argv) {
        Ok(Parsed::Run(config)) => run(&config),
        Ok(Parsed::Help(text)) => {
            println!("{text}");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

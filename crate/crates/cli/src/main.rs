use clap::Parser;

use rhocalc_cli::{run, Cli, RunConfig};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let result = RunConfig::resolve(Cli::parse()).and_then(|config| run(&config));
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

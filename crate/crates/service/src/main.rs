use std::path::PathBuf;

use affekt_service::cli;
use affekt_service::config::CONFIG_ENV;
use tracing_subscriber::EnvFilter;

fn main() {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")))
        .init();
    let env_config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let code = cli::run(
        std::env::args_os(),
        env_config,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}

use std::path::PathBuf;

use clap::Parser;
use flexsim_service::{resolve_port, serve, ServiceConfig};

#[derive(Debug, Parser)]
#[command(name = "flexsim-service", version, about = "HTTP job API for flexsim")]
struct Args {
    /// Listen port; PLATFORM_PORT takes precedence when set.
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Concurrent jobs (default: number of processors).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 64)]
    queue: usize,
    /// Finished jobs kept in memory.
    #[arg(long, default_value_t = 32)]
    store: usize,
    /// Directory served at `/`.
    #[arg(long, default_value = "www")]
    static_dir: PathBuf,
    /// Also write each finished job as a bundle under this directory.
    #[arg(long)]
    results_dir: Option<PathBuf>,
}

#[tokio::main]
async fn main() {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let args = Args::parse();
    let mut config = ServiceConfig {
        queue_capacity: args.queue,
        store_capacity: args.store,
        static_dir: Some(args.static_dir),
        results_dir: args.results_dir,
        ..ServiceConfig::default()
    };
    if let Some(n) = args.workers {
        config.workers = n;
    }
    let port = resolve_port(args.port, std::env::var("PLATFORM_PORT").ok().as_deref());
    if let Err(e) = serve(config, port).await {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

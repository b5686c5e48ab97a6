use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use periodica_service::{router, AppState};

/// HTTP service for interactive diagram sessions.
#[derive(Parser)]
#[command(name = "periodica-service", version)]
struct Args {
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
    /// Keep sessions as JSON files in this directory.
    #[arg(long)]
    snapshots: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> std::process::ExitCode {
    let args = Args::parse();
    let state = match args.snapshots {
        Some(dir) => match AppState::with_snapshots(dir) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: snapshots: {e}");
                return std::process::ExitCode::from(1);
            }
        },
        None => AppState::new(),
    };
    let listener = match tokio::net::TcpListener::bind(args.bind).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: bind {}: {e}", args.bind);
            return std::process::ExitCode::from(1);
        }
    };
    eprintln!("listening on {}", args.bind);
    if let Err(e) = axum::serve(listener, router(Arc::new(state))).await {
        eprintln!("error: {e}");
        return std::process::ExitCode::from(1);
    }
    std::process::ExitCode::SUCCESS
}

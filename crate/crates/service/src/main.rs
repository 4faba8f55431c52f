use std::net::SocketAddr;
use std::time::{Duration, Instant};

use clap::Parser;
use firebreak_service::{router, AppState, ServiceConfig};

#[derive(Debug, Parser)]
#[command(
    name = "firebreak-service",
    version,
    about = "Interactive firefighter sessions over HTTP"
)]
struct Args {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Seconds of inactivity after which a session is dropped.
    #[arg(long, default_value_t = 1800)]
    idle_timeout: u64,
    #[arg(long, default_value_t = 1024)]
    max_sessions: usize,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let args = Args::parse();
    let app = AppState::new(ServiceConfig {
        idle_timeout: Duration::from_secs(args.idle_timeout),
        max_sessions: args.max_sessions,
        ..ServiceConfig::default()
    });

    let sweeper = app.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(args.idle_timeout.clamp(1, 60)));
        loop {
            tick.tick().await;
            sweeper.evict_idle(Instant::now());
        }
    });

    let listener = tokio::net::TcpListener::bind(args.addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(app)).await
}

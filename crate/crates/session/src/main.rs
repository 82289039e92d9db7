use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use clap::Parser;

use acqlab_session::Store;

#[derive(Debug, Parser)]
#[command(name = "acqlab-session", version, about = "Interactive acquisition sessions over HTTP")]
struct Args {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Minutes after which an untouched session is dropped.
    #[arg(long, default_value_t = 30)]
    idle_minutes: u64,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let args = Args::parse();
    let listener = tokio::net::TcpListener::bind(args.addr).await?;
    eprintln!("acqlab-session listening on http://{}", listener.local_addr()?);
    let store = Arc::new(Store::new(Duration::from_secs(args.idle_minutes * 60)));
    acqlab_session::serve(listener, store).await
}
